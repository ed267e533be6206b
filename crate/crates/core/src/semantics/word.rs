use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Rational;

/// A finite timed word with absolute, nondecreasing timestamps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TimedWord {
    entries: Vec<(String, Rational)>,
}

impl TimedWord {
    pub fn new(entries: Vec<(String, Rational)>) -> Result<Self> {
        let mut last = Rational::zero();
        for (i, (_, t)) in entries.iter().enumerate() {
            if t.is_negative() || *t < last {
                return Err(Error::NonMonotoneWord(i));
            }
            last = t.clone();
        }
        Ok(TimedWord { entries })
    }

    pub fn empty() -> Self {
        TimedWord::default()
    }

    /// Build from letters and the delay before each of them.
    pub fn from_delays<S: Into<String>>(items: impl IntoIterator<Item = (S, Rational)>) -> Result<Self> {
        let mut now = Rational::zero();
        let mut entries = Vec::new();
        for (i, (s, d)) in items.into_iter().enumerate() {
            if d.is_negative() {
                return Err(Error::NonMonotoneWord(i));
            }
            now += d;
            entries.push((s.into(), now.clone()));
        }
        Ok(TimedWord { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(String, Rational)] {
        &self.entries
    }

    pub fn letters(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(s, _)| s.as_str())
    }

    pub fn timestamps(&self) -> impl Iterator<Item = &Rational> {
        self.entries.iter().map(|(_, t)| t)
    }

    /// Time elapsed before each letter (since the previous one, or since 0).
    pub fn delays(&self) -> Vec<Rational> {
        let mut prev = Rational::zero();
        self.entries
            .iter()
            .map(|(_, t)| {
                let d = t - &prev;
                prev = t.clone();
                d
            })
            .collect()
    }

    pub fn symbols_with_delays(&self) -> impl Iterator<Item = (&str, Rational)> {
        self.letters().zip(self.delays())
    }

    /// The word with every timestamp shifted by `by`.
    pub fn shifted(&self, by: &Rational) -> TimedWord {
        TimedWord {
            entries: self.entries.iter().map(|(s, t)| (s.clone(), t + by)).collect(),
        }
    }
}

pub(crate) fn fmt_rational(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

impl fmt::Display for TimedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, t)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}@{}", s, fmt_rational(t))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Entry<'a> {
    letter: &'a str,
    time: String,
}

impl Serialize for TimedWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(|(l, t)| Entry { letter: l, time: fmt_rational(t) }))
    }
}
