//! Clock constraints over the single clock `x`.
//!
//! A [`GuardExpr`] is the syntax tree a user writes; a [`Guard`] is its
//! denotation, kept as a canonical union of disjoint intervals with integer
//! endpoints. Set operations on guards go through the elementary cell
//! decomposition `{0}, (0,1), {1}, ..., {k}, (k,inf)`, which is exact because
//! every endpoint is an integer.

use std::fmt;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::Rational;

/// Upper end of an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Upper {
    Finite { value: u32, closed: bool },
    Infinity,
}

/// A nonempty interval of nonnegative reals with integer endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub lower: u32,
    pub lower_closed: bool,
    pub upper: Upper,
}

impl Interval {
    pub fn point(c: u32) -> Self {
        Interval {
            lower: c,
            lower_closed: true,
            upper: Upper::Finite { value: c, closed: true },
        }
    }

    /// Membership for a value given in half-units (`2v`), which is enough to
    /// decide membership of integers and of midpoints between integers.
    fn contains_half(&self, half: u64) -> bool {
        let lo = 2 * self.lower as u64;
        let lower_ok = if self.lower_closed { half >= lo } else { half > lo };
        let upper_ok = match self.upper {
            Upper::Infinity => true,
            Upper::Finite { value, closed } => {
                let hi = 2 * value as u64;
                if closed {
                    half <= hi
                } else {
                    half < hi
                }
            }
        };
        lower_ok && upper_ok
    }

    pub fn contains(&self, v: &Rational) -> bool {
        let lo = Rational::from_integer(self.lower.into());
        let lower_ok = if self.lower_closed { *v >= lo } else { *v > lo };
        let upper_ok = match self.upper {
            Upper::Infinity => true,
            Upper::Finite { value, closed } => {
                let hi = Rational::from_integer(value.into());
                if closed {
                    *v <= hi
                } else {
                    *v < hi
                }
            }
        };
        lower_ok && upper_ok
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Upper::Finite { value, closed: true } = self.upper {
            if value == self.lower && self.lower_closed {
                return write!(f, "{{{}}}", value);
            }
        }
        let open = if self.lower_closed { '[' } else { '(' };
        match self.upper {
            Upper::Infinity => write!(f, "{}{},inf)", open, self.lower),
            Upper::Finite { value, closed } => {
                write!(f, "{}{},{}{}", open, self.lower, value, if closed { ']' } else { ')' })
            }
        }
    }
}

/// Canonical denotation of a one-clock constraint: sorted, pairwise disjoint,
/// non-adjacent intervals. Two guards are equal iff they denote the same set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Guard {
    intervals: Vec<Interval>,
}

impl Guard {
    pub fn empty() -> Self {
        Guard { intervals: Vec::new() }
    }

    pub fn all() -> Self {
        Guard {
            intervals: vec![Interval {
                lower: 0,
                lower_closed: true,
                upper: Upper::Infinity,
            }],
        }
    }

    pub fn point(c: u32) -> Self {
        Guard { intervals: vec![Interval::point(c)] }
    }

    /// `x < c`
    pub fn less_than(c: u32) -> Self {
        if c == 0 {
            return Guard::empty();
        }
        Guard {
            intervals: vec![Interval {
                lower: 0,
                lower_closed: true,
                upper: Upper::Finite { value: c, closed: false },
            }],
        }
    }

    /// `x <= c`
    pub fn at_most(c: u32) -> Self {
        Guard {
            intervals: vec![Interval {
                lower: 0,
                lower_closed: true,
                upper: Upper::Finite { value: c, closed: true },
            }],
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_all(&self) -> bool {
        *self == Guard::all()
    }

    /// Largest finite endpoint, 0 if there is none.
    pub fn max_constant(&self) -> u32 {
        self.intervals
            .iter()
            .map(|i| match i.upper {
                Upper::Finite { value, .. } => value,
                Upper::Infinity => i.lower,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn contains(&self, v: &Rational) -> bool {
        debug_assert!(!v.is_negative());
        self.intervals.iter().any(|i| i.contains(v))
    }

    /// Membership of a value given in half-units; `2k` is the integer `k` and
    /// `2k+1` stands for any point of `(k, k+1)`.
    pub(crate) fn contains_half(&self, half: u64) -> bool {
        self.intervals.iter().any(|i| i.contains_half(half))
    }

    fn to_cells(&self, bound: u32) -> Vec<bool> {
        // cell 2k = {k}, cell 2k+1 = (k,k+1), last cell (2*bound+1) = (bound, inf)
        (0..=(2 * bound as u64 + 1)).map(|h| self.contains_half(h)).collect()
    }

    fn from_cells(cells: &[bool]) -> Guard {
        let last = cells.len() - 1;
        let mut intervals = Vec::new();
        let mut i = 0;
        while i < cells.len() {
            if !cells[i] {
                i += 1;
                continue;
            }
            let start = i;
            while i + 1 < cells.len() && cells[i + 1] {
                i += 1;
            }
            let end = i;
            let lower = (start / 2) as u32;
            let lower_closed = start % 2 == 0;
            let upper = if end == last {
                Upper::Infinity
            } else if end % 2 == 0 {
                Upper::Finite { value: (end / 2) as u32, closed: true }
            } else {
                Upper::Finite { value: (end / 2) as u32 + 1, closed: false }
            };
            intervals.push(Interval { lower, lower_closed, upper });
            i += 1;
        }
        Guard { intervals }
    }

    fn combine_cells(&self, other: &Guard, op: impl Fn(bool, bool) -> bool) -> Guard {
        let bound = self.max_constant().max(other.max_constant());
        let a = self.to_cells(bound);
        let b = other.to_cells(bound);
        let cells: Vec<bool> = a.iter().zip(&b).map(|(&x, &y)| op(x, y)).collect();
        Guard::from_cells(&cells)
    }

    pub fn intersect(&self, other: &Guard) -> Guard {
        self.combine_cells(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Guard) -> Guard {
        self.combine_cells(other, |a, b| a || b)
    }

    pub fn complement(&self) -> Guard {
        let cells: Vec<bool> = self.to_cells(self.max_constant()).iter().map(|c| !c).collect();
        Guard::from_cells(&cells)
    }

    /// A syntax tree denoting this guard, used when printing constructed rules.
    pub fn to_expr(&self) -> GuardExpr {
        if self.is_all() {
            return GuardExpr::True;
        }
        let mut parts = self.intervals.iter().map(|iv| {
            if let Upper::Finite { value, closed: true } = iv.upper {
                if value == iv.lower && iv.lower_closed {
                    return GuardExpr::Eq(value);
                }
            }
            let low = match (iv.lower, iv.lower_closed) {
                (0, true) => None,
                (c, true) => Some(GuardExpr::Ge(c)),
                (c, false) => Some(GuardExpr::Gt(c)),
            };
            let high = match iv.upper {
                Upper::Infinity => None,
                Upper::Finite { value, closed: true } => Some(GuardExpr::Le(value)),
                Upper::Finite { value, closed: false } => Some(GuardExpr::Lt(value)),
            };
            match (low, high) {
                (Some(l), Some(h)) => GuardExpr::And(Box::new(l), Box::new(h)),
                (Some(e), None) | (None, Some(e)) => e,
                (None, None) => GuardExpr::True,
            }
        });
        match parts.next() {
            None => GuardExpr::False,
            Some(first) => parts.fold(first, |acc, e| GuardExpr::Or(Box::new(acc), Box::new(e))),
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "{{}}");
        }
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{}", iv)?;
        }
        Ok(())
    }
}

/// Clock constraint as written: atoms `x < c`, `x <= c`, the constant `tt`,
/// `and`, `not`, plus the usual derived forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GuardExpr {
    True,
    False,
    Lt(u32),
    Le(u32),
    Eq(u32),
    Ge(u32),
    Gt(u32),
    Ne(u32),
    Not(Box<GuardExpr>),
    And(Box<GuardExpr>, Box<GuardExpr>),
    Or(Box<GuardExpr>, Box<GuardExpr>),
}

impl GuardExpr {
    pub fn not(e: GuardExpr) -> GuardExpr {
        GuardExpr::Not(Box::new(e))
    }

    pub fn and(a: GuardExpr, b: GuardExpr) -> GuardExpr {
        GuardExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: GuardExpr, b: GuardExpr) -> GuardExpr {
        GuardExpr::Or(Box::new(a), Box::new(b))
    }

    /// Direct evaluation on the syntax tree.
    pub fn eval(&self, v: &Rational) -> bool {
        let c = |k: &u32| Rational::from_integer((*k).into());
        match self {
            GuardExpr::True => true,
            GuardExpr::False => false,
            GuardExpr::Lt(k) => *v < c(k),
            GuardExpr::Le(k) => *v <= c(k),
            GuardExpr::Eq(k) => *v == c(k),
            GuardExpr::Ge(k) => *v >= c(k),
            GuardExpr::Gt(k) => *v > c(k),
            GuardExpr::Ne(k) => *v != c(k),
            GuardExpr::Not(e) => !e.eval(v),
            GuardExpr::And(a, b) => a.eval(v) && b.eval(v),
            GuardExpr::Or(a, b) => a.eval(v) || b.eval(v),
        }
    }

    pub fn max_constant(&self) -> u32 {
        match self {
            GuardExpr::True | GuardExpr::False => 0,
            GuardExpr::Lt(k)
            | GuardExpr::Le(k)
            | GuardExpr::Eq(k)
            | GuardExpr::Ge(k)
            | GuardExpr::Gt(k)
            | GuardExpr::Ne(k) => *k,
            GuardExpr::Not(e) => e.max_constant(),
            GuardExpr::And(a, b) | GuardExpr::Or(a, b) => a.max_constant().max(b.max_constant()),
        }
    }
}

/// Canonicalize a constraint into its interval-union denotation.
pub fn normalize_guard(e: &GuardExpr) -> Guard {
    match e {
        GuardExpr::True => Guard::all(),
        GuardExpr::False => Guard::empty(),
        GuardExpr::Lt(c) => Guard::less_than(*c),
        GuardExpr::Le(c) => Guard::at_most(*c),
        GuardExpr::Eq(c) => Guard::point(*c),
        GuardExpr::Ge(c) => Guard::less_than(*c).complement(),
        GuardExpr::Gt(c) => Guard::at_most(*c).complement(),
        GuardExpr::Ne(c) => Guard::point(*c).complement(),
        GuardExpr::Not(inner) => normalize_guard(inner).complement(),
        GuardExpr::And(a, b) => normalize_guard(a).intersect(&normalize_guard(b)),
        GuardExpr::Or(a, b) => normalize_guard(a).union(&normalize_guard(b)),
    }
}

/// Evaluate a guard at a clock value.
pub fn eval_guard(g: &Guard, v: &Rational) -> bool {
    g.contains(v)
}

/// Integer part and fractional part of a nonnegative rational.
pub(crate) fn split_value(v: &Rational) -> (u64, Rational) {
    let whole = v.floor();
    let int = whole.to_integer().to_u64().expect("clock value out of range");
    let frac = v - &whole;
    debug_assert!(!frac.is_negative() && frac < Rational::from_integer(1.into()));
    (int, frac)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn point_and_its_complement() {
        let one = Guard::point(1);
        assert!(one.contains(&r(1, 1)));
        let not_one = one.complement();
        assert!(!not_one.contains(&r(1, 1)));
        assert!(not_one.contains(&r(9, 10)));
        assert_eq!(not_one.to_string(), "[0,1) u (1,inf)");
    }

    #[test]
    fn strictly_greater() {
        let g = normalize_guard(&GuardExpr::Gt(2));
        assert!(g.contains(&r(22, 10)));
        assert!(!g.contains(&r(2, 1)));
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize_guard(&GuardExpr::True), Guard::all());
        let e = GuardExpr::and(
            GuardExpr::not(GuardExpr::Lt(1)),
            GuardExpr::not(GuardExpr::Le(0)),
        );
        let g = normalize_guard(&e);
        assert_eq!(g.to_string(), "[1,inf)");
        let e = GuardExpr::and(GuardExpr::Le(1), GuardExpr::not(GuardExpr::Lt(1)));
        assert_eq!(normalize_guard(&e), Guard::point(1));
    }

    #[test]
    fn cells_coalesce() {
        let g = Guard::less_than(1).union(&Guard::point(1));
        assert_eq!(g, Guard::at_most(1));
        assert_eq!(Guard::less_than(0), Guard::empty());
        assert!(Guard::all().complement().is_empty());
    }

    #[test]
    fn expression_round_trip_of_canonical_form() {
        let g = normalize_guard(&GuardExpr::or(GuardExpr::Eq(3), GuardExpr::Lt(1)));
        assert_eq!(normalize_guard(&g.to_expr()), g);
    }
}
