use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Player utility selector. The social cost is always the bottleneck
/// congestion; only the per-player cost varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostModel {
    /// `max` of edge congestions on the player's path.
    BottleneckMax,
    /// `sum` of `2^C_e` over the player's path.
    ExpSum,
    /// `log2` of the ExpSum cost; ordered by the underlying integer.
    LogExpSum,
    /// `sum` of `C_e` over the player's path.
    LinearSum,
    /// `sum` of `C_e^d` over the player's path, `d >= 1`.
    PolySum(u32),
}

impl CostModel {
    /// Stable lowercase name used in files and CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            CostModel::BottleneckMax => "bottleneck_max",
            CostModel::ExpSum => "exp_sum",
            CostModel::LogExpSum => "log_exp_sum",
            CostModel::LinearSum => "linear_sum",
            CostModel::PolySum(_) => "poly_sum",
        }
    }

    pub fn degree(&self) -> Option<u32> {
        match self {
            CostModel::PolySum(d) => Some(*d),
            _ => None,
        }
    }

    pub fn is_additive(&self) -> bool {
        !matches!(self, CostModel::BottleneckMax)
    }

    /// Contribution of one edge at congestion `c` for additive models.
    pub fn edge_term(&self, c: u64) -> BigUint {
        match self {
            CostModel::BottleneckMax => BigUint::from(c),
            CostModel::ExpSum | CostModel::LogExpSum => BigUint::one() << c,
            CostModel::LinearSum => BigUint::from(c),
            CostModel::PolySum(d) => BigUint::from(c).pow(*d),
        }
    }

    /// Exact cost of a path whose edges carry the given congestions.
    pub fn cost_of_loads(&self, loads: impl IntoIterator<Item = u64>) -> ExactCost {
        let raw = match self {
            CostModel::BottleneckMax => BigUint::from(loads.into_iter().max().unwrap_or(0)),
            _ => loads.into_iter().fold(BigUint::zero(), |acc, c| acc + self.edge_term(c)),
        };
        ExactCost {
            raw,
            log_scale: matches!(self, CostModel::LogExpSum),
        }
    }

    fn edge_term_u128(&self, c: u64) -> Option<u128> {
        match self {
            CostModel::BottleneckMax | CostModel::LinearSum => Some(c as u128),
            CostModel::ExpSum | CostModel::LogExpSum => (c < 127).then(|| 1u128 << c),
            CostModel::PolySum(d) => (c as u128).checked_pow(*d),
        }
    }

    /// Fixed-width cost of a path, equal to `cost_of_loads(..).raw()` when
    /// it returns `Some`.
    pub(crate) fn cost_u128(&self, loads: impl IntoIterator<Item = u64>) -> Option<u128> {
        match self {
            CostModel::BottleneckMax => Some(loads.into_iter().max().unwrap_or(0) as u128),
            _ => loads
                .into_iter()
                .try_fold(0u128, |acc, c| acc.checked_add(self.edge_term_u128(c)?)),
        }
    }

    /// True when every cost in a game with `players` players and paths of at
    /// most `max_len` edges is representable by `cost_u128`.
    pub(crate) fn fits_u128(&self, players: usize, max_len: usize) -> bool {
        let worst = self
            .edge_term_u128(players as u64)
            .and_then(|t| t.checked_mul(max_len.max(1) as u128));
        worst.is_some_and(|w| w < u128::MAX / 2)
    }
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostModel::PolySum(d) => write!(f, "poly_sum({d})"),
            other => f.write_str(other.name()),
        }
    }
}

/// An exact player cost. Comparison always uses the underlying integer; for
/// `LogExpSum` the reported value is `log2` of it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactCost {
    raw: BigUint,
    log_scale: bool,
}

impl ExactCost {
    pub fn raw(&self) -> &BigUint {
        &self.raw
    }

    pub fn is_log_scale(&self) -> bool {
        self.log_scale
    }

    /// Numeric value for display: the integer itself, or its `log2` under
    /// `LogExpSum`.
    pub fn reported(&self) -> f64 {
        if self.log_scale {
            log2_big(&self.raw)
        } else {
            self.raw.to_f64().unwrap_or(f64::INFINITY)
        }
    }
}

impl PartialOrd for ExactCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactCost {
    fn cmp(&self, other: &Self) -> Ordering {
        self.raw.cmp(&other.raw)
    }
}

impl fmt::Display for ExactCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log_scale {
            write!(f, "log2({})", self.raw)
        } else {
            write!(f, "{}", self.raw)
        }
    }
}

/// `log2` of a big integer, accurate to double precision.
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits f64").log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit prefix");
    top.log2() + shift as f64
}

/// `ceil(log2(x))` for `x >= 1`, computed exactly from the bit length.
pub fn ceil_log2(x: &BigUint) -> u64 {
    if x <= &BigUint::one() {
        0
    } else {
        (x - 1u32).bits()
    }
}
