//! Braid words, their closures, and Murasugi normal forms of 3-braids.
//!
//! Text format for words is `"<n>: w1 w2 ... wk"`, where each `wi` is a
//! signed 1-based generator index (`-2` is the inverse of the second Artin
//! generator). Normal forms use `"F<1|2|3> d=<int> a=<ints>"` or `m=<int>`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> std::result::Result<Self, ParseError> {
        if strands < 1 {
            return Err(ParseError::NoStrands);
        }
        for &l in &letters {
            if l == 0 {
                return Err(ParseError::Malformed("zero is not a generator".into()));
            }
            if l.unsigned_abs() as usize >= strands {
                return Err(ParseError::IndexOutOfRange { letter: l, strands });
            }
        }
        Ok(Self { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        assert!(strands >= 1);
        Self { strands, letters: vec![] }
    }

    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        let (head, tail) = text
            .split_once(':')
            .ok_or_else(|| ParseError::Malformed(format!("missing ':' in {text:?}")))?;
        let strands: usize = head
            .trim()
            .parse()
            .map_err(|_| ParseError::Malformed(format!("bad strand count {:?}", head.trim())))?;
        let letters = tail
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i32>()
                    .map_err(|_| ParseError::Malformed(format!("bad letter {tok:?}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.letters.iter().filter(|&&l| l > 0).count()
    }

    pub fn negative_count(&self) -> usize {
        self.letters.iter().filter(|&&l| l < 0).count()
    }

    pub fn writhe(&self) -> i32 {
        self.letters.iter().map(|l| l.signum()).sum()
    }

    pub fn mirror(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().map(|l| -l).collect(),
        }
    }

    /// Appends one letter, checking its range.
    pub fn with_letter(&self, letter: i32) -> std::result::Result<Self, ParseError> {
        let mut letters = self.letters.clone();
        letters.push(letter);
        Self::new(self.strands, letters)
    }

    /// `perm[p]` is the bottom position (0-based) reached by the strand that
    /// starts at top position `p`.
    pub fn permutation(&self) -> Vec<usize> {
        // at[q] = top position of the strand currently at position q
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut perm = vec![0; self.strands];
        for (q, &p) in at.iter().enumerate() {
            perm[p] = q;
        }
        perm
    }

    /// Component index of each top position, numbered by smallest position.
    pub fn strand_components(&self) -> Vec<usize> {
        let perm = self.permutation();
        let mut comp = vec![usize::MAX; self.strands];
        let mut next = 0;
        for start in 0..self.strands {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut p = start;
            while comp[p] == usize::MAX {
                comp[p] = next;
                p = perm[p];
            }
            next += 1;
        }
        comp
    }

    pub fn closure_component_count(&self) -> usize {
        self.strand_components()
            .into_iter()
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn disjoint_union(&self, other: &Self) -> Self {
        let shift = self.strands as i32;
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().map(|&l| l + l.signum() * shift));
        Self {
            strands: self.strands + other.strands,
            letters,
        }
    }

    /// Transverse self-linking number of the closure.
    pub fn self_linking(&self) -> i32 {
        self.writhe() - self.strands as i32
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Murasugi's conjugacy representatives of 3-braids, with `h = (σ1 σ2)^3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MurasugiNF {
    /// `h^d σ1 σ2^{-a1} ... σ1 σ2^{-an}`
    Family1 { d: i32, a: Vec<u32> },
    /// `h^d σ2^m`
    Family2 { d: i32, m: i32 },
    /// `h^d σ1^m σ2^{-1}`, `m ∈ {-1, -2, -3}`
    Family3 { d: i32, m: i32 },
}

impl MurasugiNF {
    pub fn family(&self) -> u8 {
        match self {
            Self::Family1 { .. } => 1,
            Self::Family2 { .. } => 2,
            Self::Family3 { .. } => 3,
        }
    }

    pub fn d(&self) -> i32 {
        match *self {
            Self::Family1 { d, .. } | Self::Family2 { d, .. } | Self::Family3 { d, .. } => d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Family1 { a, .. } => {
                if a.is_empty() || a.iter().all(|&x| x == 0) {
                    return Err(Error::InvalidNormalForm(
                        "family 1 needs a nonempty exponent list with some entry > 0".into(),
                    ));
                }
            }
            Self::Family2 { .. } => {}
            Self::Family3 { m, .. } => {
                if !(-3..=-1).contains(m) {
                    return Err(Error::InvalidNormalForm(format!(
                        "family 3 requires m in {{-1,-2,-3}}, got {m}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse(ParseError::Malformed(msg));
        let mut toks = text.split_whitespace();
        let fam = toks.next().ok_or_else(|| bad("empty normal form".into()))?;
        let mut d = None;
        let mut a = None;
        let mut m = None;
        for tok in toks {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {tok:?}")))?;
            let int = |s: &str| s.parse::<i32>().map_err(|_| bad(format!("bad integer {s:?}")));
            match key {
                "d" => d = Some(int(val)?),
                "m" => m = Some(int(val)?),
                "a" => {
                    let list = val
                        .split(',')
                        .map(|s| s.parse::<u32>().map_err(|_| bad(format!("bad exponent {s:?}"))))
                        .collect::<Result<Vec<_>>>()?;
                    a = Some(list);
                }
                _ => return Err(bad(format!("unknown key {key:?}"))),
            }
        }
        let d = d.ok_or_else(|| bad("missing d=".into()))?;
        let nf = match (fam, a, m) {
            ("F1", Some(a), None) => Self::Family1 { d, a },
            ("F2", None, Some(m)) => Self::Family2 { d, m },
            ("F3", None, Some(m)) => Self::Family3 { d, m },
            _ => return Err(bad(format!("cannot read normal form {text:?}"))),
        };
        nf.validate()?;
        Ok(nf)
    }

    pub fn to_word(&self) -> Result<BraidWord> {
        self.validate()?;
        let d = self.d();
        let mut letters = Vec::new();
        if d >= 0 {
            for _ in 0..3 * d {
                letters.extend([1, 2]);
            }
        } else {
            for _ in 0..3 * -d {
                letters.extend([-2, -1]);
            }
        }
        match self {
            Self::Family1 { a, .. } => {
                for &ai in a {
                    letters.push(1);
                    letters.extend(std::iter::repeat_n(-2, ai as usize));
                }
            }
            Self::Family2 { m, .. } => {
                letters.extend(std::iter::repeat_n(2 * m.signum(), m.unsigned_abs() as usize));
            }
            Self::Family3 { m, .. } => {
                letters.extend(std::iter::repeat_n(-1, m.unsigned_abs() as usize));
                letters.push(-2);
            }
        }
        Ok(BraidWord::new(3, letters)?)
    }

    pub fn writhe(&self) -> Result<i32> {
        self.validate()?;
        let d = self.d();
        Ok(match self {
            Self::Family1 { a, .. } => 6 * d + a.len() as i32 - a.iter().sum::<u32>() as i32,
            Self::Family2 { m, .. } => 6 * d + m,
            Self::Family3 { m, .. } => 6 * d + m - 1,
        })
    }
}

impl fmt::Display for MurasugiNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Family1 { d, a } => {
                let list: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                write!(f, "F1 d={d} a={}", list.join(","))
            }
            Self::Family2 { d, m } => write!(f, "F2 d={d} m={m}"),
            Self::Family3 { d, m } => write!(f, "F3 d={d} m={m}"),
        }
    }
}

impl FromStr for MurasugiNF {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
