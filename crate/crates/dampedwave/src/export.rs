//! Plain-text artifact writers: CSV tables and self-contained SVG plots.
//!
//! Everything here is deterministic: the same inputs produce byte-identical
//! output. Numbers in CSV use the shortest round-trip form; plot
//! coordinates are written with fixed precision.

use std::fmt::Write as _;

use crate::dynamics::EnergyTrace;
use crate::scalar::Scalar;
use crate::spectral::Spectrum;

const SVG_WIDTH: f64 = 640.0;
const SVG_HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 45.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Eigenvalue table: one row per eigenvalue, residual included when the
/// producing route measured one (closed forms report zero).
pub fn spectrum_csv<S: Scalar>(spectrum: &Spectrum<S>) -> String {
    let mut out = String::from("index,re,im,provenance,residual\n");
    let label = spectrum.provenance.label();
    for (i, v) in spectrum.values.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{},{label},{}", v.re, v.im, spectrum.residuals[i]);
    }
    out
}

/// Energy history table: time, energy, tip samples, and the Lyapunov
/// functional at the trace's multiplier strength.
pub fn energy_csv<S: Scalar>(trace: &EnergyTrace<S>) -> String {
    let mut out = String::from("t,energy,tip_displacement,tip_velocity,lyapunov\n");
    for i in 0..trace.times.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            trace.times[i],
            trace.energies[i],
            trace.tip_displacement[i],
            trace.tip_velocity[i],
            trace.lyapunov[i]
        );
    }
    out
}

fn tick_label(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.abs() >= 1e4 || x.abs() < 1e-3 {
        format!("{x:.2e}")
    } else {
        format!("{x:.3}")
    }
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        // Degenerate ranges get unit padding so the mapping stays finite.
        let (x_min, x_max) = pad(x_min, x_max);
        let (y_min, y_max) = pad(y_min, y_max);
        Frame {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN_LEFT + (v - self.x_min) / (self.x_max - self.x_min)
            * (SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        SVG_HEIGHT - MARGIN_BOTTOM
            - (v - self.y_min) / (self.y_max - self.y_min)
                * (SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn pad(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (-1.0, 1.0);
    }
    if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        let span = hi - lo;
        (lo - 0.05 * span, hi + 0.05 * span)
    }
}

fn svg_header(out: &mut String) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" \
         viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
}

fn svg_axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let x0 = MARGIN_LEFT;
    let x1 = SVG_WIDTH - MARGIN_RIGHT;
    let y0 = SVG_HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        out,
        "<path d=\"M {x0:.1} {y1:.1} L {x0:.1} {y0:.1} L {x1:.1} {y0:.1}\" fill=\"none\" \
         stroke=\"black\" stroke-width=\"1\"/>"
    );
    for i in 0..=4 {
        let fx = frame.x_min + (frame.x_max - frame.x_min) * i as f64 / 4.0;
        let px = frame.x(fx);
        let _ = writeln!(
            out,
            "<line x1=\"{px:.1}\" y1=\"{y0:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
            y0 + 4.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{px:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"11\" \
             text-anchor=\"middle\">{}</text>",
            y0 + 16.0,
            tick_label(fx)
        );
        let fy = frame.y_min + (frame.y_max - frame.y_min) * i as f64 / 4.0;
        let py = frame.y(fy);
        let _ = writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{x0:.1}\" y2=\"{py:.1}\" stroke=\"black\"/>",
            x0 - 4.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"11\" \
             text-anchor=\"end\">{}</text>",
            x0 - 7.0,
            py + 4.0,
            tick_label(fy)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" \
         text-anchor=\"middle\">{x_label}</text>",
        (x0 + x1) / 2.0,
        SVG_HEIGHT - 10.0
    );
    let _ = writeln!(
        out,
        "<text x=\"14\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" \
         text-anchor=\"middle\" transform=\"rotate(-90 14 {:.1})\">{y_label}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
}

fn svg_legend(out: &mut String, names: &[&str]) {
    for (i, name) in names.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_TOP + 14.0 * i as f64;
        let _ = writeln!(
            out,
            "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"10\" height=\"10\" fill=\"{color}\"/>",
            MARGIN_LEFT + 8.0,
            y - 9.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{y:.1}\" font-family=\"monospace\" font-size=\"11\">{name}\
             </text>",
            MARGIN_LEFT + 22.0
        );
    }
}

/// Scatter plot of one or more eigenvalue families in the complex plane.
pub fn spectrum_scatter_svg<S: Scalar>(series: &[(&str, &Spectrum<S>)]) -> String {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (_, s) in series {
        for v in &s.values {
            xs.push(v.re.to_f64().unwrap_or(0.0));
            ys.push(v.im.to_f64().unwrap_or(0.0));
        }
    }
    let fold = |acc: (f64, f64), &v: &f64| (acc.0.min(v), acc.1.max(v));
    let (x_min, x_max) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), fold);
    let (y_min, y_max) = ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), fold);
    let frame = Frame::new(x_min, x_max, y_min, y_max);

    let mut out = String::new();
    svg_header(&mut out);
    svg_axes(&mut out, &frame, "Re", "Im");
    for (i, (_, s)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for v in &s.values {
            let px = frame.x(v.re.to_f64().unwrap_or(0.0));
            let py = frame.y(v.im.to_f64().unwrap_or(0.0));
            let _ = writeln!(
                out,
                "<circle cx=\"{px:.1}\" cy=\"{py:.1}\" r=\"3\" fill=\"{color}\" \
                 fill-opacity=\"0.75\"/>"
            );
        }
    }
    let names: Vec<&str> = series.iter().map(|(n, _)| *n).collect();
    svg_legend(&mut out, &names);
    out.push_str("</svg>\n");
    out
}

/// Smallest energy the log plot resolves; values below are clamped.
const LOG_FLOOR: f64 = 1e-300;

/// Line plot of log10(energy) against time for one or more histories.
pub fn energy_lines_svg<S: Scalar>(series: &[(&str, &[S], &[S])]) -> String {
    let mut t_min = f64::INFINITY;
    let mut t_max = f64::NEG_INFINITY;
    let mut e_min = f64::INFINITY;
    let mut e_max = f64::NEG_INFINITY;
    for (_, times, energies) in series {
        for t in times.iter() {
            let t = t.to_f64().unwrap_or(0.0);
            t_min = t_min.min(t);
            t_max = t_max.max(t);
        }
        for e in energies.iter() {
            let le = e.to_f64().unwrap_or(LOG_FLOOR).max(LOG_FLOOR).log10();
            e_min = e_min.min(le);
            e_max = e_max.max(le);
        }
    }
    let frame = Frame::new(t_min, t_max, e_min, e_max);

    let mut out = String::new();
    svg_header(&mut out);
    svg_axes(&mut out, &frame, "t", "log10 E");
    for (i, (_, times, energies)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut path = String::new();
        for (k, (t, e)) in times.iter().zip(energies.iter()).enumerate() {
            let px = frame.x(t.to_f64().unwrap_or(0.0));
            let py = frame.y(e.to_f64().unwrap_or(LOG_FLOOR).max(LOG_FLOOR).log10());
            let cmd = if k == 0 { 'M' } else { 'L' };
            let _ = write!(path, "{cmd} {px:.1} {py:.1} ");
        }
        let _ = writeln!(
            out,
            "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            path.trim_end()
        );
    }
    let names: Vec<&str> = series.iter().map(|(n, _, _)| *n).collect();
    svg_legend(&mut out, &names);
    out.push_str("</svg>\n");
    out
}
