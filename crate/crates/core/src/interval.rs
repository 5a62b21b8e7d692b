//! Representability intervals in doubled units.

use std::fmt;

use crate::spq::{P2Class, PSubtype};

/// An integer or semi-integer, stored doubled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn from_int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// A set of values stepping by 1 between two endpoints of equal parity, or
/// the empty set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HalfIntInterval {
    Empty,
    Range { lo2: i64, hi2: i64 },
}

impl HalfIntInterval {
    /// `[lo2/2, hi2/2]`, empty when `lo2 > hi2`.
    ///
    /// # Panics
    /// If the endpoints have different parity.
    pub fn new(lo2: i64, hi2: i64) -> Self {
        if lo2 > hi2 {
            return HalfIntInterval::Empty;
        }
        assert!((hi2 - lo2) % 2 == 0, "endpoints {lo2}/2 and {hi2}/2 differ in parity");
        HalfIntInterval::Range { lo2, hi2 }
    }

    pub fn int(lo: i64, hi: i64) -> Self {
        Self::new(2 * lo, 2 * hi)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, HalfIntInterval::Empty)
    }

    pub fn bounds(&self) -> Option<(i64, i64)> {
        match *self {
            HalfIntInterval::Empty => None,
            HalfIntInterval::Range { lo2, hi2 } => Some((lo2, hi2)),
        }
    }

    pub fn lo(&self) -> Option<HalfInt> {
        self.bounds().map(|b| HalfInt(b.0))
    }

    pub fn hi(&self) -> Option<HalfInt> {
        self.bounds().map(|b| HalfInt(b.1))
    }

    pub fn contains(&self, x: HalfInt) -> bool {
        self.bounds().is_some_and(|(lo, hi)| lo <= x.0 && x.0 <= hi && (x.0 - lo) % 2 == 0)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        match (self.bounds(), other.bounds()) {
            (Some((a, b)), Some((c, d))) => Self::new(a.max(c), b.min(d)),
            _ => HalfIntInterval::Empty,
        }
    }

    /// Number of values.
    pub fn count(&self) -> usize {
        self.bounds().map_or(0, |(lo, hi)| ((hi - lo) / 2 + 1) as usize)
    }

    pub fn values(&self) -> impl Iterator<Item = HalfInt> {
        let (lo, hi) = self.bounds().unwrap_or((1, 0));
        (lo..=hi).step_by(2).map(HalfInt)
    }
}

impl fmt::Display for HalfIntInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lo(), self.hi()) {
            (Some(lo), Some(hi)) => write!(f, "[{lo},{hi}]"),
            _ => f.write_str("empty"),
        }
    }
}

/// Whether `[a, b]` and `[c, d]` (doubled, as real intervals) meet.
fn meets((a, b): (i64, i64), (c, d): (i64, i64)) -> bool {
    a.max(c) <= b.min(d)
}

/// Interval of a chain with `len` edges.
pub fn q_interval(len: u32) -> HalfIntInterval {
    assert!(len >= 1);
    let l = i64::from(len);
    HalfIntInterval::int(1 - l, l - 1)
}

/// Interval of a series composition.
pub fn s_interval(children: &[HalfIntInterval]) -> HalfIntInterval {
    let mut lo = 0;
    let mut hi = 0;
    for c in children {
        let Some((a, b)) = c.bounds() else {
            return HalfIntInterval::Empty;
        };
        lo += a;
        hi += b;
    }
    HalfIntInterval::new(lo, hi)
}

/// Interval of a parallel composition with three children.
pub fn p3_interval(l: HalfIntInterval, c: HalfIntInterval, r: HalfIntInterval) -> HalfIntInterval {
    let (Some((ml, xl)), Some((mc, xc)), Some((mr, xr))) = (l.bounds(), c.bounds(), r.bounds()) else {
        return HalfIntInterval::Empty;
    };
    HalfIntInterval::new((ml - 4).max(mc).max(mr + 4), (xl - 4).min(xc).min(xr + 4))
}

/// Interval of a parallel composition with two children of the given class.
pub fn p2_interval(class: &P2Class, l: HalfIntInterval, r: HalfIntInterval) -> HalfIntInterval {
    let (Some((ml, xl)), Some((mr, xr))) = (l.bounds(), r.bounds()) else {
        return HalfIntInterval::Empty;
    };
    let diff = (ml - xr, xl - mr);
    let g = i64::from(class.gamma);
    let rho = i64::from(class.rho);
    let (ok, lo, hi) = match class.subtype {
        PSubtype::Pio2 { .. } => (meets(diff, (4, 8 - 2 * g)), (ml - 4).max(mr) + g, xl.min(xr + 4) - g),
        PSubtype::Pio3 { .. } => {
            (meets(diff, (5, 7 - 2 * g)), (ml - 3).max(mr + 2) + g - rho, (xl - 1).min(xr + 4) - g - rho)
        }
        PSubtype::Pin3 { .. } => (meets(diff, (6, 6)), (ml - 2).max(mr + 4) - rho, (xl - 2).min(xr + 4) - rho),
    };
    if ok {
        HalfIntInterval::new(lo, hi)
    } else {
        HalfIntInterval::Empty
    }
}

/// How the aliases of the root child's poles relate to the poles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AliasConfig {
    BothCoincide,
    OneCoincides,
    NoneCoincide,
}

impl AliasConfig {
    pub fn from_flags(u: bool, v: bool) -> Self {
        match (u, v) {
            (true, true) => AliasConfig::BothCoincide,
            (false, false) => AliasConfig::NoneCoincide,
            _ => AliasConfig::OneCoincides,
        }
    }
}

/// Spiralities of the root child compatible with a straight reference edge.
pub fn root_delta(config: AliasConfig) -> HalfIntInterval {
    match config {
        AliasConfig::BothCoincide => HalfIntInterval::int(2, 6),
        AliasConfig::OneCoincides => HalfIntInterval::int(3, 5),
        AliasConfig::NoneCoincide => HalfIntInterval::int(4, 4),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spq::Side;

    fn iv(lo: i64, hi: i64) -> HalfIntInterval {
        HalfIntInterval::int(lo, hi)
    }

    fn class(subtype: PSubtype) -> P2Class {
        let (gamma, rho) = match subtype {
            PSubtype::Pio2 { alpha, beta } => (alpha + beta - 2, 0),
            PSubtype::Pio3 { d, alpha, beta } => (alpha + beta - 2, d.rho()),
            PSubtype::Pin3 { d, d2 } => (0, d.rho() + d2.rho()),
        };
        P2Class { subtype, k2: [[1, 1], [1, 1]], gamma, rho }
    }

    #[test]
    fn chain_intervals() {
        assert_eq!(q_interval(1), iv(0, 0));
        assert_eq!(q_interval(4), iv(-3, 3));
        assert_eq!(q_interval(2), iv(-1, 1));
    }

    #[test]
    fn series_sums() {
        assert_eq!(s_interval(&[iv(0, 0), iv(0, 0)]), iv(0, 0));
        assert_eq!(s_interval(&[iv(-1, 1), iv(-2, 2), iv(0, 0)]), iv(-3, 3));
        let half = HalfIntInterval::new(-1, 1);
        let s = s_interval(&[half, iv(-1, 1)]);
        assert_eq!(s, HalfIntInterval::new(-3, 3));
        assert_eq!(s.to_string(), "[-3/2,3/2]");
        assert!(!s.lo().unwrap().is_integer());
    }

    #[test]
    fn three_children() {
        assert_eq!(p3_interval(iv(-1, 3), iv(-2, 2), iv(-3, 1)), iv(-1, 1));
        assert_eq!(p3_interval(iv(0, 0), iv(0, 0), iv(0, 0)), HalfIntInterval::Empty);
        assert_eq!(p3_interval(iv(-2, 2), iv(-2, 2), iv(-2, 2)), iv(0, 0));
        assert_eq!(p3_interval(iv(-1, 1), iv(-1, 1), iv(-1, 1)), HalfIntInterval::Empty);
    }

    #[test]
    fn two_children() {
        let p22 = class(PSubtype::Pio2 { alpha: 2, beta: 2 });
        assert_eq!(p2_interval(&p22, iv(1, 1), iv(-1, -1)), iv(0, 0));
        assert_eq!(p2_interval(&p22, iv(0, 0), iv(0, 0)), HalfIntInterval::Empty);
        let lr = class(PSubtype::Pin3 { d: Side::Left, d2: Side::Right });
        let r = p2_interval(&lr, iv(2, 2), iv(-1, -1));
        assert_eq!(r, HalfIntInterval::new(1, 1));
        assert_eq!(r.to_string(), "[1/2,1/2]");
        let p11 = class(PSubtype::Pio2 { alpha: 1, beta: 1 });
        assert_eq!(p2_interval(&p11, iv(0, 0), iv(0, 0)), HalfIntInterval::Empty);
        assert_eq!(p2_interval(&p11, iv(-1, 1), iv(-1, 1)), iv(-1, 1));
    }

    #[test]
    fn root_deltas() {
        assert_eq!(root_delta(AliasConfig::BothCoincide), iv(2, 6));
        assert_eq!(root_delta(AliasConfig::OneCoincides), iv(3, 5));
        assert_eq!(root_delta(AliasConfig::NoneCoincide), iv(4, 4));
        assert_eq!(AliasConfig::from_flags(true, false), AliasConfig::OneCoincides);
    }

    #[test]
    fn membership_respects_parity() {
        let i = HalfIntInterval::new(-3, 3);
        assert!(i.contains(HalfInt(1)));
        assert!(!i.contains(HalfInt(0)));
        assert_eq!(i.count(), 4);
        assert_eq!(i.values().map(|v| v.0).collect::<Vec<_>>(), [-3, -1, 1, 3]);
        assert_eq!(HalfIntInterval::Empty.values().count(), 0);
        assert_eq!(iv(-1, 1).intersect(&iv(2, 6)), HalfIntInterval::Empty);
    }
}
