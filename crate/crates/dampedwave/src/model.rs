//! Semi-discrete models of the boundary-damped wave equation on a uniform
//! mesh: second-order form M v'' = -A v - (xi/h) v'_tip e_tip, with the
//! scheme choosing the mass matrix (identity or consistent tridiagonal).
//!
//! The displacement vector collects the N interior nodes plus the damped
//! tip node; the clamped end is eliminated. Stiffness and mass are stored
//! in symmetric tridiagonal form and never densified except through
//! [`assemble_dense_operator`], which is guarded by size.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;
use crate::tridiag::{LdltFactor, SymTridiag};

/// Spatial discretization family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Second-order centered differences; lumped (identity) mass.
    FiniteDifference,
    /// Piecewise-linear elements; consistent tridiagonal mass.
    FiniteElement,
}

impl Scheme {
    pub fn label(self) -> &'static str {
        match self {
            Scheme::FiniteDifference => "fd",
            Scheme::FiniteElement => "fem",
        }
    }
}

/// Continuum data: wave speed c, domain length l, boundary feedback gain xi.
///
/// The gain must satisfy 0 <= xi < c; the upper limit is excluded because
/// the closed-loop spectrum degenerates there.
#[derive(Debug, Clone, Copy)]
pub struct PhysicalParams<S> {
    pub wave_speed: S,
    pub length: S,
    pub gain: S,
}

impl<S: Scalar> PhysicalParams<S> {
    pub fn new(wave_speed: S, length: S, gain: S) -> Result<Self> {
        if !(wave_speed.is_finite() && wave_speed > S::zero()) {
            return Err(Error::InvalidParameter {
                reason: format!("wave speed must be finite and positive, got {wave_speed}"),
            });
        }
        if !(length.is_finite() && length > S::zero()) {
            return Err(Error::InvalidParameter {
                reason: format!("domain length must be finite and positive, got {length}"),
            });
        }
        if !gain.is_finite() || gain < S::zero() || gain >= wave_speed {
            return Err(Error::GainOutOfRange {
                context: "model assembly".into(),
                requirement: "0 <= gain < wave speed (strictly sub-characteristic)".into(),
                xi: gain.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            wave_speed,
            length,
            gain,
        })
    }

    pub fn is_damped(&self) -> bool {
        self.gain > S::zero()
    }
}

/// Uniform mesh with `interior_points` nodes strictly inside the domain;
/// the damped tip node is added on top, so the discrete system has
/// `interior_points + 1` degrees of freedom and spacing h = l / (n + 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mesh {
    pub interior_points: usize,
}

impl Mesh {
    pub fn new(interior_points: usize) -> Result<Self> {
        if interior_points < 2 {
            return Err(Error::MeshTooCoarse { n: interior_points });
        }
        Ok(Self { interior_points })
    }

    pub fn spacing<S: Scalar>(&self, length: S) -> S {
        length / S::of_usize(self.interior_points + 1)
    }
}

/// Phase-space state (displacement, velocity), each of the model order.
#[derive(Debug, Clone, PartialEq)]
pub struct State<S> {
    pub displacement: Vec<S>,
    pub velocity: Vec<S>,
}

impl<S: Scalar> State<S> {
    pub fn zeros(order: usize) -> Self {
        Self {
            displacement: vec![S::zero(); order],
            velocity: vec![S::zero(); order],
        }
    }

    pub fn order(&self) -> usize {
        self.displacement.len()
    }

    /// Euclidean norm over both blocks.
    pub fn norm(&self) -> S {
        let mut acc = S::zero();
        for &x in self.displacement.iter().chain(self.velocity.iter()) {
            acc += x * x;
        }
        acc.sqrt()
    }

    pub fn scaled(&self, factor: S) -> Self {
        Self {
            displacement: self.displacement.iter().map(|&x| x * factor).collect(),
            velocity: self.velocity.iter().map(|&x| x * factor).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: S) {
        for (x, &y) in self.displacement.iter_mut().zip(&other.displacement) {
            *x += factor * y;
        }
        for (x, &y) in self.velocity.iter_mut().zip(&other.velocity) {
            *x += factor * y;
        }
    }
}

/// Stiffness block shared by both schemes: (c^2/h^2) tridiag(-1, 2, -1)
/// with the last diagonal entry halved to 1 by the one-sided tip closure.
pub fn boundary_stiffness<S: Scalar>(wave_speed: S, spacing: S, order: usize) -> SymTridiag<S> {
    let k = wave_speed * wave_speed / (spacing * spacing);
    let mut diag = vec![k * S::two(); order];
    diag[order - 1] = k;
    let off = vec![-k; order.saturating_sub(1)];
    SymTridiag::new(diag, off)
}

/// Consistent mass of the piecewise-linear elements, h-normalized:
/// rows (1/6, 2/3, 1/6) with the tip diagonal 1/3 from its half cell.
pub fn consistent_mass<S: Scalar>(order: usize) -> SymTridiag<S> {
    let sixth = S::one() / S::of(6.0);
    let mut diag = vec![S::of(4.0) * sixth; order];
    diag[order - 1] = S::two() * sixth;
    let off = vec![sixth; order.saturating_sub(1)];
    SymTridiag::new(diag, off)
}

/// Assembled semi-discrete model. Construct via [`build_model`].
#[derive(Debug, Clone)]
pub struct SemiDiscreteModel<S> {
    params: PhysicalParams<S>,
    mesh: Mesh,
    scheme: Scheme,
    stiffness: SymTridiag<S>,
    mass: SymTridiag<S>,
    mass_factor: Option<LdltFactor<S>>,
    /// Coefficient of the tip velocity in the momentum equation: -xi / h.
    tip_damping: S,
}

/// Dense first-order operators larger than this are refused; callers that
/// only need the action of the operator can always use [`apply_operator`].
pub const DENSE_ORDER_GUARD: usize = 2000;

/// Assembles the mass, stiffness, and boundary damping for the requested
/// scheme on the given mesh.
pub fn build_model<S: Scalar>(
    params: PhysicalParams<S>,
    mesh: Mesh,
    scheme: Scheme,
) -> Result<SemiDiscreteModel<S>> {
    if mesh.interior_points < 2 {
        return Err(Error::MeshTooCoarse {
            n: mesh.interior_points,
        });
    }
    let order = mesh.interior_points + 1;
    let h = mesh.spacing(params.length);
    let stiffness = boundary_stiffness(params.wave_speed, h, order);
    let (mass, mass_factor) = match scheme {
        Scheme::FiniteDifference => (SymTridiag::identity(order), None),
        Scheme::FiniteElement => {
            let mass = consistent_mass(order);
            let factor = mass.factor_ldlt()?;
            (mass, Some(factor))
        }
    };
    Ok(SemiDiscreteModel {
        params,
        mesh,
        scheme,
        stiffness,
        mass,
        mass_factor,
        tip_damping: -params.gain / h,
    })
}

impl<S: Scalar> SemiDiscreteModel<S> {
    /// Degrees of freedom of the second-order form (interior nodes + tip).
    pub fn order(&self) -> usize {
        self.mesh.interior_points + 1
    }

    /// Dimension of the first-order phase space, 2 * order.
    pub fn phase_dim(&self) -> usize {
        2 * self.order()
    }

    pub fn params(&self) -> &PhysicalParams<S> {
        &self.params
    }

    pub fn mesh(&self) -> Mesh {
        self.mesh
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn spacing(&self) -> S {
        self.mesh.spacing(self.params.length)
    }

    pub fn stiffness(&self) -> &SymTridiag<S> {
        &self.stiffness
    }

    pub fn mass(&self) -> &SymTridiag<S> {
        &self.mass
    }

    /// Index of the damped tip node within the displacement block.
    pub fn tip_index(&self) -> usize {
        self.order() - 1
    }

    /// Coefficient multiplying the tip velocity in the momentum equation.
    pub fn tip_damping(&self) -> S {
        self.tip_damping
    }

    /// Solves M x = rhs in place (a no-op for the identity mass).
    pub fn mass_solve_in_place(&self, rhs: &mut [S]) {
        if let Some(factor) = &self.mass_factor {
            factor.solve_in_place(rhs);
        }
    }
}

/// Applies the first-order generator to a state: the displacement rate is
/// the velocity, and the acceleration solves
/// M a = -A v - (xi/h) * velocity_tip * e_tip.
pub fn apply_operator<S: Scalar>(model: &SemiDiscreteModel<S>, state: &State<S>) -> State<S> {
    let order = model.order();
    assert_eq!(state.order(), order, "state order must match the model");
    let mut acceleration = vec![S::zero(); order];
    model.stiffness.matvec(&state.displacement, &mut acceleration);
    for a in acceleration.iter_mut() {
        *a = -*a;
    }
    let tip = model.tip_index();
    acceleration[tip] += model.tip_damping * state.velocity[tip];
    model.mass_solve_in_place(&mut acceleration);
    State {
        displacement: state.velocity.clone(),
        velocity: acceleration,
    }
}

/// Densifies the first-order operator [[0, I], [-M^-1 A, M^-1 B]], with B
/// the rank-one tip damping. Refused above [`DENSE_ORDER_GUARD`] phase
/// dimensions.
pub fn assemble_dense_operator<S: Scalar>(
    model: &SemiDiscreteModel<S>,
) -> Result<DenseMatrix<S>> {
    let order = model.order();
    let dim = model.phase_dim();
    if dim > DENSE_ORDER_GUARD {
        return Err(Error::DenseSizeGuard {
            order: dim,
            guard: DENSE_ORDER_GUARD,
        });
    }
    let mut op = DenseMatrix::zeros(dim);
    for i in 0..order {
        *op.at_mut(i, order + i) = S::one();
    }
    // Column j of -M^-1 A.
    let mut column = vec![S::zero(); order];
    for j in 0..order {
        for (i, slot) in column.iter_mut().enumerate() {
            *slot = -model.stiffness.entry(i, j);
        }
        model.mass_solve_in_place(&mut column);
        for i in 0..order {
            *op.at_mut(order + i, j) = column[i];
        }
    }
    // Damping column: M^-1 e_tip scaled by -xi/h, acting on the tip velocity.
    let tip = model.tip_index();
    for slot in column.iter_mut() {
        *slot = S::zero();
    }
    column[tip] = model.tip_damping;
    model.mass_solve_in_place(&mut column);
    for i in 0..order {
        *op.at_mut(order + i, order + tip) = column[i];
    }
    Ok(op)
}
