use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::mat2::Mat2Z;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StLetter {
    S,
    SInv,
    T,
    TInv,
}

impl StLetter {
    pub fn inverse(self) -> Self {
        match self {
            StLetter::S => StLetter::SInv,
            StLetter::SInv => StLetter::S,
            StLetter::T => StLetter::TInv,
            StLetter::TInv => StLetter::T,
        }
    }

    pub fn matrix(self) -> Mat2Z {
        match self {
            StLetter::S => Mat2Z::s(),
            StLetter::SInv => Mat2Z::s().inverse(),
            StLetter::T => Mat2Z::t(),
            StLetter::TInv => Mat2Z::t().inverse(),
        }
    }

    fn base(self) -> char {
        match self {
            StLetter::S | StLetter::SInv => 'S',
            _ => 'T',
        }
    }

    fn sign(self) -> i64 {
        match self {
            StLetter::S | StLetter::T => 1,
            _ => -1,
        }
    }
}

/// A freely reduced word in `S^{±1}, T^{±1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordST {
    letters: Vec<StLetter>,
}

impl WordST {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_letters<I: IntoIterator<Item = StLetter>>(it: I) -> Self {
        let mut w = Self::identity();
        for l in it {
            w.push(l);
        }
        w
    }

    pub fn letter(l: StLetter) -> Self {
        Self { letters: vec![l] }
    }

    pub fn s() -> Self {
        Self::letter(StLetter::S)
    }

    pub fn t() -> Self {
        Self::letter(StLetter::T)
    }

    pub fn t_pow(k: i64) -> Self {
        let l = if k >= 0 { StLetter::T } else { StLetter::TInv };
        Self::from_letters(std::iter::repeat_n(l, k.unsigned_abs() as usize))
    }

    pub fn letters(&self) -> &[StLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, l: StLetter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn mul(&self, o: &WordST) -> WordST {
        let mut w = self.clone();
        for &l in &o.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> WordST {
        WordST {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> WordST {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = WordST::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Exact evaluation in SL₂(ℤ).
    pub fn to_matrix(&self) -> Mat2Z {
        self.letters
            .iter()
            .fold(Mat2Z::identity(), |acc, l| acc.mul(&l.matrix()))
    }

    /// Deterministic word for `m` by Euclidean reduction of the bottom row.
    ///
    /// Writes `m = T^{q₁} S T^{q₂} S ⋯ T^{b}`, with a leading `S S` when the
    /// reduction ends at `-T^{b}`.
    pub fn from_matrix(m: &Mat2Z) -> WordST {
        let mut cur = m.clone();
        let mut out = WordST::identity();
        let mut negate = false;
        while !cur.c.is_zero() {
            let q = if cur.c.is_positive() {
                cur.a.div_floor(&cur.c)
            } else {
                -cur.a.div_floor(&(-cur.c.clone()))
            };
            let q64 = q.to_i64().expect("word exponent fits in i64");
            out = out.mul(&WordST::t_pow(q64));
            cur = Mat2Z::t_pow(-q64).mul(&cur);
            out.push(StLetter::S);
            cur = Mat2Z::s().inverse().mul(&cur);
        }
        if cur.a.is_negative() {
            negate = true;
            cur = cur.neg();
        }
        debug_assert!(cur.a.is_one() && cur.d.is_one());
        out = out.mul(&WordST::t_pow(
            cur.b.to_i64().expect("word exponent fits in i64"),
        ));
        if negate {
            out = WordST::from_letters([StLetter::S, StLetter::S]).mul(&out);
        }
        debug_assert_eq!(&out.to_matrix(), m);
        out
    }

    /// Compact notation such as `T^2 S T^-1`; the empty word prints as `1`.
    pub fn to_compact_string(&self) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * l.sign();
            parts.push(if e == 1 {
                l.base().to_string()
            } else {
                format!("{}^{}", l.base(), e)
            });
            i = j;
        }
        parts.join(" ")
    }

    /// Parses words like `T^2 S`, `TTS`, `S^-1 T`, `1`.
    pub fn parse(s: &str) -> Result<WordST> {
        let t = s.trim();
        if t.is_empty() || t == "1" || t == "id" || t == "I" {
            return Ok(WordST::identity());
        }
        let chars: Vec<char> = t
            .chars()
            .filter(|c| !c.is_whitespace() && !matches!(c, '*' | '.' | '·'))
            .collect();
        let mut out = WordST::identity();
        let mut i = 0;
        while i < chars.len() {
            let base = chars[i];
            if base != 'S' && base != 'T' {
                return Err(Error::Parse(format!("unexpected {base:?} in word {s:?}")));
            }
            i += 1;
            let mut exp: i64 = 1;
            if chars.get(i) == Some(&'^') {
                i += 1;
                let start = i;
                if chars.get(i) == Some(&'-') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let txt: String = chars[start..i].iter().collect();
                exp = txt
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            }
            let l = match (base, exp >= 0) {
                ('S', true) => StLetter::S,
                ('S', false) => StLetter::SInv,
                (_, true) => StLetter::T,
                (_, false) => StLetter::TInv,
            };
            for _ in 0..exp.unsigned_abs() {
                out.push(l);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for WordST {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact_string())
    }
}

impl FromStr for WordST {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        WordST::parse(s)
    }
}

impl Serialize for WordST {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_compact_string())
    }
}

impl<'de> Deserialize<'de> for WordST {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        WordST::parse(&s).map_err(serde::de::Error::custom)
    }
}

pub fn word_to_matrix(w: &WordST) -> Mat2Z {
    w.to_matrix()
}

pub fn matrix_to_word(m: &Mat2Z) -> WordST {
    WordST::from_matrix(m)
}
