//! Bundled run configurations. Each is compiled into the binary so
//! `--preset` works from any directory; the same files live under
//! `presets/` for editing and inspection.

/// (name, JSON text) for every bundled configuration.
pub const PRESETS: [(&str, &str); 3] = [
    (
        "filtered-fd",
        include_str!("../presets/filtered-fd.json"),
    ),
    (
        "filtered-fem",
        include_str!("../presets/filtered-fem.json"),
    ),
    (
        "unfiltered-fd",
        include_str!("../presets/unfiltered-fd.json"),
    ),
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_config, ExperimentConfig};

    #[test]
    fn every_preset_parses_and_validates() {
        for (name, text) in PRESETS {
            let cfg: ExperimentConfig = parse_config(text)
                .unwrap_or_else(|e| panic!("preset {name} does not parse: {e}"));
            cfg.validate()
                .unwrap_or_else(|e| panic!("preset {name} fails validation: {e}"));
            cfg.require_simulation()
                .unwrap_or_else(|e| panic!("preset {name} is not simulate-ready: {e}"));
        }
        assert!(preset("no-such-preset").is_none());
    }
}
