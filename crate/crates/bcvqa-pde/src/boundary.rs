//! Boundary conditions and their ghost-point relations.
//!
//! Every non-periodic condition is expressed through the ghost value it implies,
//! `y_ghost = a·y_adjacent + b`, using first-order one-sided differences for the
//! derivative (`∂y/∂x ≈ (y_1 − y_0)/Δx` on the left, `(y_{N+1} − y_N)/Δx` on the
//! right):
//!
//! | condition                      | left `(a, b)`                   | right `(a, b)`                 |
//! |--------------------------------|---------------------------------|--------------------------------|
//! | Dirichlet `y = D`              | `(0, D)`                        | `(0, D)`                       |
//! | Neumann `∂y/∂x = N`            | `(1, −N·Δx)`                    | `(1, N·Δx)`                    |
//! | Robin `α·y/Δx + β·∂y/∂x = γ`   | `(−β/(α−β), γΔx/(α−β))`         | `(β/(α+β), γΔx/(α+β))`         |

use crate::error::PdeError;
use crate::Result;
use bcvqa_sim::Real;

/// Left (`x = 0`) or right (`x = 1`) end of the domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Ghost node `x_0`.
    Left,
    /// Ghost node `x_{N_p+1}`.
    Right,
}

/// Condition imposed at one end of the domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryCondition<T> {
    /// Wrap-around coupling of the two end points (must be set on both sides).
    Periodic,
    /// Fixed ghost value `y = value`.
    Dirichlet {
        /// Prescribed value.
        value: T,
    },
    /// Fixed outward-oriented slope `∂y/∂x = gradient` (x-axis orientation).
    Neumann {
        /// Prescribed derivative along +x.
        gradient: T,
    },
    /// `α·y_ghost/Δx + β·∂y/∂x = γ`.
    Robin {
        /// Weight of the ghost value (per Δx).
        alpha: T,
        /// Weight of the derivative.
        beta: T,
        /// Right-hand side.
        gamma: T,
    },
}

/// Ghost value as an affine function of the adjacent interior value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhostRelation<T> {
    /// Weight of the adjacent interior value.
    pub a: T,
    /// Constant offset.
    pub b: T,
}

impl<T: Real> BoundaryCondition<T> {
    /// Whether this is the periodic marker.
    pub fn is_periodic(&self) -> bool {
        matches!(self, BoundaryCondition::Periodic)
    }

    /// Short lower-case name (`periodic`, `dirichlet`, `neumann`, `robin`).
    pub fn kind(&self) -> &'static str {
        match self {
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::Dirichlet { .. } => "dirichlet",
            BoundaryCondition::Neumann { .. } => "neumann",
            BoundaryCondition::Robin { .. } => "robin",
        }
    }

    /// Ghost relation on `side` for spacing `dx`; `None` for periodic.
    pub fn ghost(&self, side: Side, dx: T) -> Result<Option<GhostRelation<T>>> {
        let rel = match *self {
            BoundaryCondition::Periodic => return Ok(None),
            BoundaryCondition::Dirichlet { value } => GhostRelation {
                a: T::zero(),
                b: value,
            },
            BoundaryCondition::Neumann { gradient } => match side {
                Side::Left => GhostRelation {
                    a: T::one(),
                    b: -gradient * dx,
                },
                Side::Right => GhostRelation {
                    a: T::one(),
                    b: gradient * dx,
                },
            },
            BoundaryCondition::Robin { alpha, beta, gamma } => {
                let denom = match side {
                    Side::Left => alpha - beta,
                    Side::Right => alpha + beta,
                };
                if denom == T::zero() {
                    return Err(PdeError::InvalidProblem(format!(
                        "Robin coefficients leave the {side:?} ghost value undetermined"
                    )));
                }
                let a = match side {
                    Side::Left => -beta / denom,
                    Side::Right => beta / denom,
                };
                GhostRelation {
                    a,
                    b: gamma * dx / denom,
                }
            }
        };
        if !rel.a.is_finite() || !rel.b.is_finite() {
            return Err(PdeError::InvalidProblem(format!(
                "non-finite {side:?} boundary data"
            )));
        }
        Ok(Some(rel))
    }
}

/// Conditions at both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundarySpec<T> {
    /// Condition at `x = 0`.
    pub left: BoundaryCondition<T>,
    /// Condition at `x = 1`.
    pub right: BoundaryCondition<T>,
}

impl<T: Real> BoundarySpec<T> {
    /// Both sides periodic.
    pub fn periodic() -> Self {
        Self {
            left: BoundaryCondition::Periodic,
            right: BoundaryCondition::Periodic,
        }
    }

    /// Dirichlet values on both sides.
    pub fn dirichlet(left: T, right: T) -> Self {
        Self {
            left: BoundaryCondition::Dirichlet { value: left },
            right: BoundaryCondition::Dirichlet { value: right },
        }
    }

    /// Neumann slopes on both sides.
    pub fn neumann(left: T, right: T) -> Self {
        Self {
            left: BoundaryCondition::Neumann { gradient: left },
            right: BoundaryCondition::Neumann { gradient: right },
        }
    }

    /// Rejects one-sided periodicity.
    pub fn validate(&self) -> Result<()> {
        if self.left.is_periodic() != self.right.is_periodic() {
            return Err(PdeError::InvalidProblem(
                "periodic must be set on both sides or neither".into(),
            ));
        }
        Ok(())
    }

    /// Whether both sides are periodic.
    pub fn is_periodic(&self) -> bool {
        self.left.is_periodic() && self.right.is_periodic()
    }

    /// The condition on `side`.
    pub fn side(&self, side: Side) -> &BoundaryCondition<T> {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Ghost relations `(left, right)`; `None` for periodic problems.
    pub fn ghosts(&self, dx: T) -> Result<Option<(GhostRelation<T>, GhostRelation<T>)>> {
        self.validate()?;
        match (
            self.left.ghost(Side::Left, dx)?,
            self.right.ghost(Side::Right, dx)?,
        ) {
            (Some(l), Some(r)) => Ok(Some((l, r))),
            _ => Ok(None),
        }
    }
}
