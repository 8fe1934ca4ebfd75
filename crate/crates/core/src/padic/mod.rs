//! Residue fields `F_{p^f}`, the unramified rings `W(F_{p^f}) / p^N`, and
//! their fraction fields with tracked precision.

mod descriptor;
mod embed;
mod residue;
mod ring;
mod scaled;

use serde::{Deserialize, Serialize};

pub use descriptor::{is_prime, prime_factors, DescriptorRecord, RingDescriptor};
pub(crate) use descriptor::{checked_pow, same_ring};
pub use embed::{Frobenius, RingEmbedding};
pub use residue::{residue_power_test, ResidueElem};
pub use ring::{teichmuller_lift, UnramifiedRingElem};
pub(crate) use ring::reduce_wide;
pub use scaled::ScaledFieldElem;

/// A `p`-adic valuation; `Infinite` means "zero at the working precision".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}
