use std::cmp::Ordering;
use std::fmt;

use crate::model::split_value;
use crate::Rational;

/// A clock region for a fixed `cmax`: `{i}` for `i <= cmax`, `(i, i+1)` for
/// `i < cmax`, and the unbounded `(cmax, inf)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Point(u32),
    Open(u32),
    Tail,
}

impl Region {
    fn rank(self) -> u64 {
        match self {
            Region::Point(i) => 2 * i as u64,
            Region::Open(i) => 2 * i as u64 + 1,
            Region::Tail => u64::MAX,
        }
    }

    /// Position in the list returned by [`regions`]: `{i}` is `2i`, `(i,i+1)`
    /// is `2i+1` and the tail is `2cmax+1`. Guards with constants at most
    /// `cmax` are constant on each region, and membership of the region in a
    /// guard is decided by this index.
    pub fn half_units(self, cmax: u32) -> u64 {
        match self {
            Region::Tail => 2 * cmax as u64 + 1,
            r => r.rank(),
        }
    }

    pub fn is_point(self) -> bool {
        matches!(self, Region::Point(_))
    }

    pub fn is_tail(self) -> bool {
        matches!(self, Region::Tail)
    }

    /// Region reached when the fractional part leaves 0.
    pub(crate) fn opened(self, cmax: u32) -> Region {
        match self {
            Region::Point(i) if i == cmax => Region::Tail,
            Region::Point(i) => Region::Open(i),
            r => r,
        }
    }

    /// Region reached when the fractional part wraps around to 0.
    pub(crate) fn closed(self) -> Region {
        match self {
            Region::Open(i) => Region::Point(i + 1),
            r => r,
        }
    }

    pub fn display(self, cmax: u32) -> impl fmt::Display {
        RegionDisplay { region: self, cmax }
    }
}

impl PartialOrd for Region {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Region {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

struct RegionDisplay {
    region: Region,
    cmax: u32,
}

impl fmt::Display for RegionDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.region {
            Region::Point(i) => write!(f, "{{{}}}", i),
            Region::Open(i) => write!(f, "({},{})", i, i + 1),
            Region::Tail => write!(f, "({},inf)", self.cmax),
        }
    }
}

/// All regions for `cmax`, in ascending order.
pub fn regions(cmax: u32) -> Vec<Region> {
    let mut out: Vec<Region> = (0..cmax).flat_map(|i| [Region::Point(i), Region::Open(i)]).collect();
    out.push(Region::Point(cmax));
    out.push(Region::Tail);
    out
}

/// The region containing clock value `v`.
pub fn region_of(v: &Rational, cmax: u32) -> Region {
    let (int, frac) = split_value(v);
    let zero = num_traits::Zero::is_zero(&frac);
    if int > cmax as u64 || (int == cmax as u64 && !zero) {
        Region::Tail
    } else if zero {
        Region::Point(int as u32)
    } else {
        Region::Open(int as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn region_lists() {
        let two = regions(2);
        assert_eq!(two.len(), 6);
        let shown: Vec<String> = two.iter().map(|g| g.display(2).to_string()).collect();
        assert_eq!(shown, ["{0}", "(0,1)", "{1}", "(1,2)", "{2}", "(2,inf)"]);
        assert_eq!(regions(0), vec![Region::Point(0), Region::Tail]);
        assert!(two.windows(2).all(|w| w[0] < w[1]));
        for (i, g) in two.iter().enumerate() {
            assert_eq!(g.half_units(2), i as u64);
        }
    }

    #[test]
    fn region_of_values() {
        assert_eq!(region_of(&r(12, 10), 2), Region::Open(1));
        assert_eq!(region_of(&r(2, 1), 2), Region::Point(2));
        assert_eq!(region_of(&r(21, 10), 2), Region::Tail);
        assert_eq!(region_of(&r(0, 1), 0), Region::Point(0));
        assert_eq!(region_of(&r(1, 3), 0), Region::Tail);
    }
}
