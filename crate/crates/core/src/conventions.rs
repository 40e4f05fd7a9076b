//! The sign conventions shared by every module.

use serde::{Deserialize, Serialize};

pub use crate::exterior::form::{SlotOrder, DEFAULT_SLOT_ORDER};

/// Grading sign in the generalized Jacobi identity
/// `Σ_{i+j=k+1} Σ_{σ∈Sh(i,k−i)} χ(σ) ε(i,j) l_j(l_i(x_σ(1),…,x_σ(i)), x_σ(i+1),…,x_σ(k)) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JacobiConvention {
    /// `ε(i,j) = (−1)^{i(j−1)}`.
    #[default]
    Shuffle,
    /// `ε(i,j) = (−1)^{ij}`.
    Alternate,
}

impl JacobiConvention {
    pub fn sign(self, i: usize, j: usize) -> i64 {
        let e = match self {
            JacobiConvention::Shuffle => i * (j - 1),
            JacobiConvention::Alternate => i * j,
        };
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            JacobiConvention::Shuffle => "shuffle",
            JacobiConvention::Alternate => "alternate",
        }
    }
}

/// The pair of conventions in force for a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conventions {
    pub jacobi: JacobiConvention,
    pub slots: SlotOrder,
}

pub const DEFAULT_CONVENTIONS: Conventions = Conventions {
    jacobi: JacobiConvention::Shuffle,
    slots: DEFAULT_SLOT_ORDER,
};

impl Default for Conventions {
    fn default() -> Self {
        DEFAULT_CONVENTIONS
    }
}

impl Conventions {
    pub fn all() -> [Conventions; 4] {
        [
            Conventions {
                jacobi: JacobiConvention::Shuffle,
                slots: SlotOrder::LastFirst,
            },
            Conventions {
                jacobi: JacobiConvention::Alternate,
                slots: SlotOrder::LastFirst,
            },
            Conventions {
                jacobi: JacobiConvention::Shuffle,
                slots: SlotOrder::FirstFirst,
            },
            Conventions {
                jacobi: JacobiConvention::Alternate,
                slots: SlotOrder::FirstFirst,
            },
        ]
    }
}
