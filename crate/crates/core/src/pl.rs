//! Exact continuous piecewise-linear functions on `[0, 1]`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::field::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Breakpoint {
    pub t: Rational,
    pub value: Rational,
}

/// Stored in canonical form: breakpoints strictly ascending from 0 to 1 with
/// no interior breakpoint where the slope does not change. Equality of
/// values is therefore equality of functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PLFunction {
    breakpoints: Vec<Breakpoint>,
}

impl PLFunction {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::OutOfRange("need at least two breakpoints".into()));
        }
        if points[0].0 != Rational::zero() || points[points.len() - 1].0 != Rational::one() {
            return Err(Error::OutOfRange("domain must be [0, 1]".into()));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::OutOfRange("breakpoints must ascend strictly".into()));
        }
        let breakpoints = points.into_iter().map(|(t, value)| Breakpoint { t, value }).collect();
        Ok(Self { breakpoints }.simplified())
    }

    /// `a + b t`
    pub fn linear(a: Rational, b: Rational) -> Self {
        let end = &a + &b;
        Self {
            breakpoints: vec![
                Breakpoint {
                    t: Rational::zero(),
                    value: a,
                },
                Breakpoint {
                    t: Rational::one(),
                    value: end,
                },
            ],
        }
    }

    pub fn linear_int(a: i64, b: i64) -> Self {
        Self::linear(Rational::from_int(a), Rational::from_int(b))
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        if t.is_negative() || *t > Rational::one() {
            return Err(Error::OutOfRange(format!("t = {t} outside [0, 1]")));
        }
        let idx = self.breakpoints.partition_point(|b| b.t <= *t);
        if idx == self.breakpoints.len() {
            return Ok(self.breakpoints[idx - 1].value.clone());
        }
        let (a, b) = (&self.breakpoints[idx - 1], &self.breakpoints[idx]);
        let slope = &(&b.value - &a.value) / &(&b.t - &a.t);
        Ok(&a.value + &(&slope * &(t - &a.t)))
    }

    /// Slope on each linear piece, left to right.
    pub fn slopes(&self) -> Vec<Rational> {
        self.breakpoints
            .windows(2)
            .map(|w| &(&w[1].value - &w[0].value) / &(&w[1].t - &w[0].t))
            .collect()
    }

    /// Slope immediately to the right of `t`, for `t < 1`.
    pub fn right_slope(&self, t: &Rational) -> Rational {
        let idx = self.breakpoints.partition_point(|b| b.t <= *t).clamp(1, self.breakpoints.len() - 1);
        self.slopes()[idx - 1].clone()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut ts: Vec<Rational> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .map(|b| b.t.clone())
            .collect();
        ts.sort();
        ts.dedup();
        let breakpoints = ts
            .into_iter()
            .map(|t| {
                let value = &self.eval(&t).unwrap() + &other.eval(&t).unwrap();
                Breakpoint { t, value }
            })
            .collect();
        Self { breakpoints }.simplified()
    }

    pub fn translate(&self, c: &Rational) -> Self {
        Self {
            breakpoints: self
                .breakpoints
                .iter()
                .map(|b| Breakpoint {
                    t: b.t.clone(),
                    value: &b.value + c,
                })
                .collect(),
        }
    }

    fn simplified(mut self) -> Self {
        let mut out: Vec<Breakpoint> = Vec::with_capacity(self.breakpoints.len());
        for b in self.breakpoints.drain(..) {
            while out.len() >= 2 {
                let (p, q) = (&out[out.len() - 2], &out[out.len() - 1]);
                let s1 = &(&q.value - &p.value) / &(&q.t - &p.t);
                let s2 = &(&b.value - &q.value) / &(&b.t - &q.t);
                if s1 == s2 {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(b);
        }
        Self { breakpoints: out }
    }
}

impl<'de> Deserialize<'de> for PLFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            breakpoints: Vec<Breakpoint>,
        }
        let r = Repr::deserialize(d)?;
        PLFunction::new(r.breakpoints.into_iter().map(|b| (b.t, b.value)).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PLFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .breakpoints
            .iter()
            .map(|b| format!("({}, {})", b.t, b.value))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
