use std::collections::BTreeMap;
use std::fmt;

use super::region::{region_of, Region};
use crate::model::{split_value, Ata, LocId};
use crate::semantics::ConfigSet;
use crate::Rational;

/// A nonempty set of `(location, region)` pairs, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pairs: Vec<(LocId, Region)>,
}

impl Letter {
    /// `None` when `pairs` is empty.
    pub fn new(pairs: impl IntoIterator<Item = (LocId, Region)>) -> Option<Letter> {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort();
        pairs.dedup();
        (!pairs.is_empty()).then_some(Letter { pairs })
    }

    pub fn pairs(&self) -> &[(LocId, Region)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: &(LocId, Region)) -> bool {
        self.pairs.binary_search(pair).is_ok()
    }

    pub fn is_subset(&self, other: &Letter) -> bool {
        let mut it = other.pairs.iter();
        self.pairs.iter().all(|p| it.by_ref().any(|q| q == p))
    }

    pub fn has_point(&self) -> bool {
        self.pairs.iter().any(|(_, r)| r.is_point())
    }

    pub fn is_tail_only(&self) -> bool {
        self.pairs.iter().all(|(_, r)| r.is_tail())
    }

    pub(crate) fn map_regions(&self, f: impl Fn(Region) -> Region) -> Letter {
        Letter::new(self.pairs.iter().map(|&(q, r)| (q, f(r)))).expect("nonempty")
    }
}

/// A word over sets of `(location, region)` pairs: the abstraction of a
/// configuration set, letters ordered by the fractional part of the clock.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegionWord {
    cmax: u32,
    letters: Vec<Letter>,
}

impl RegionWord {
    pub fn new(cmax: u32, letters: Vec<Letter>) -> RegionWord {
        RegionWord { cmax, letters }
    }

    pub fn empty(cmax: u32) -> RegionWord {
        RegionWord { cmax, letters: Vec::new() }
    }

    /// Build from lists of pairs; empty lists are skipped.
    pub fn from_pairs(cmax: u32, letters: impl IntoIterator<Item = Vec<(LocId, Region)>>) -> RegionWord {
        RegionWord { cmax, letters: letters.into_iter().filter_map(Letter::new).collect() }
    }

    pub fn cmax(&self) -> u32 {
        self.cmax
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(LocId, Region)> {
        self.letters.iter().flat_map(|l| l.pairs.iter())
    }

    pub fn locations(&self) -> impl Iterator<Item = LocId> + '_ {
        self.pairs().map(|&(q, _)| q)
    }

    /// Points may only occur in the first letter.
    pub fn is_well_formed(&self) -> bool {
        self.letters.iter().skip(1).all(|l| !l.has_point())
    }

    /// Render with location names, e.g. `{q2:(1,2), q3:(2,inf)} {q1:(0,1)}`.
    pub fn display<'a>(&'a self, a: &'a Ata) -> impl fmt::Display + 'a {
        WordDisplay { word: self, names: Some(a) }
    }
}

struct WordDisplay<'a> {
    word: &'a RegionWord,
    names: Option<&'a Ata>,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "<empty>");
        }
        for (i, letter) in self.word.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{{")?;
            for (j, &(q, r)) in letter.pairs.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                match self.names {
                    Some(a) => write!(f, "{}", a.location_name(q))?,
                    None => write!(f, "{}", q)?,
                }
                write!(f, ":{}", r.display(self.word.cmax))?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl fmt::Display for RegionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        WordDisplay { word: self, names: None }.fmt(f)
    }
}

/// Abstract a configuration set: tag each configuration with its region and
/// fractional part, sort by the fractional part, group equal fractional
/// parts into one letter and forget them.
pub fn abstract_h(p: &ConfigSet, cmax: u32) -> RegionWord {
    let mut groups: BTreeMap<Rational, Vec<(LocId, Region)>> = BTreeMap::new();
    for c in p {
        let (_, frac) = split_value(&c.value);
        groups.entry(frac).or_default().push((c.loc, region_of(&c.value, cmax)));
    }
    RegionWord::from_pairs(cmax, groups.into_values())
}

/// Monotone domination: a strictly increasing map sends every letter of `w1`
/// to a superset letter of `w2`. Leftmost matching is complete for this order.
pub fn preceq(w1: &RegionWord, w2: &RegionWord) -> bool {
    let mut rest = w2.letters.iter();
    w1.letters.iter().all(|l| rest.by_ref().any(|m| l.is_subset(m)))
}

/// Every location of the word is accepting (true for the empty word).
pub fn is_bad_word(w: &RegionWord, a: &Ata) -> bool {
    w.locations().all(|q| a.is_accepting(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use crate::semantics::Configuration;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn worked_abstraction() {
        let a = samples::three_locations();
        let [q1, q2, q3] = ["q1", "q2", "q3"].map(|n| a.location(n).unwrap());
        let p: ConfigSet = [
            Configuration::new(q1, r(1, 2)),
            Configuration::new(q2, r(12, 10)),
            Configuration::new(q3, r(22, 10)),
        ]
        .into_iter()
        .collect();
        let w = abstract_h(&p, 2);
        let expected = RegionWord::from_pairs(
            2,
            [vec![(q2, Region::Open(1)), (q3, Region::Tail)], vec![(q1, Region::Open(0))]],
        );
        assert_eq!(w, expected);
        assert_eq!(w.display(&a).to_string(), "{q2:(1,2), q3:(2,inf)} {q1:(0,1)}");
    }

    #[test]
    fn equal_fractions_group() {
        let q = LocId(0);
        let q2 = LocId(1);
        let p: ConfigSet =
            [Configuration::new(q, r(3, 2)), Configuration::new(q2, r(5, 2))].into_iter().collect();
        let w = abstract_h(&p, 2);
        assert_eq!(w, RegionWord::from_pairs(2, [vec![(q, Region::Open(1)), (q2, Region::Tail)]]));
        assert_eq!(abstract_h(&ConfigSet::new(), 2), RegionWord::empty(2));
        let p0: ConfigSet = [Configuration::new(q, r(0, 1))].into_iter().collect();
        assert_eq!(abstract_h(&p0, 2).to_string(), "{#0:{0}}");
        assert_eq!(RegionWord::empty(1).to_string(), "<empty>");
    }

    #[test]
    fn domination() {
        let (q, p, p2) = (LocId(0), LocId(1), LocId(2));
        let a = Region::Open(0);
        let b = Region::Point(1);
        let single = RegionWord::from_pairs(1, [vec![(q, a)]]);
        let bigger = RegionWord::from_pairs(1, [vec![(p, b)], vec![(q, a), (p2, a)]]);
        assert!(preceq(&RegionWord::empty(1), &bigger));
        assert!(preceq(&single, &bigger));
        assert!(!preceq(&bigger, &single));
        let qp = RegionWord::from_pairs(1, [vec![(q, a)], vec![(p, b)]]);
        let pq = RegionWord::from_pairs(1, [vec![(p, b)], vec![(q, a)]]);
        assert!(!preceq(&qp, &pq));
    }

    #[test]
    fn bad_words() {
        let a = samples::no_unit_distance();
        let (q0, q2) = (a.location("q0").unwrap(), a.location("q2").unwrap());
        assert!(is_bad_word(&RegionWord::empty(1), &a));
        assert!(is_bad_word(&RegionWord::from_pairs(1, [vec![(q0, Region::Point(0))]]), &a));
        let w = RegionWord::from_pairs(1, [vec![(q0, Region::Point(0))], vec![(q2, Region::Tail)]]);
        assert!(!is_bad_word(&w, &a));
    }
}
