use std::fmt;

use super::perm::Permutation;

/// A letter of the free group on `x, y`: generator index (0 = x, 1 = y) and sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u8,
    pub inv: bool,
}

impl Letter {
    pub const X: Letter = Letter { gen: 0, inv: false };
    pub const Y: Letter = Letter { gen: 1, inv: false };
    pub const XI: Letter = Letter { gen: 0, inv: true };
    pub const YI: Letter = Letter { gen: 1, inv: true };

    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

/// A freely reduced word in `x, y`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn x() -> Self {
        Self {
            letters: vec![Letter::X],
        }
    }

    pub fn y() -> Self {
        Self {
            letters: vec![Letter::Y],
        }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(it: I) -> Self {
        let mut w = Self::identity();
        for l in it {
            w.push(l);
        }
        w
    }

    /// Parses e.g. `x y X Y` or `xyx^-1`; capitals denote inverses.
    pub fn parse(s: &str) -> Option<Self> {
        let mut out = Vec::new();
        let chars: Vec<char> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*' && *c != '.')
            .collect();
        let mut i = 0;
        while i < chars.len() {
            let mut l = match chars[i] {
                'x' => Letter::X,
                'y' => Letter::Y,
                'X' => Letter::XI,
                'Y' => Letter::YI,
                '1' if chars.len() == 1 => return Some(Self::identity()),
                _ => return None,
            };
            i += 1;
            if chars.get(i) == Some(&'^')
                && chars.get(i + 1) == Some(&'-')
                && chars.get(i + 2) == Some(&'1')
            {
                l = l.inverse();
                i += 3;
            }
            out.push(l);
        }
        Some(Self::from_letters(out))
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

    /// Appends a letter with free cancellation.
    pub fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Exponent sums `(#x, #y)`.
    pub fn abelianize(&self) -> (i64, i64) {
        let mut v = (0i64, 0i64);
        for l in &self.letters {
            let s = if l.inv { -1 } else { 1 };
            if l.gen == 0 {
                v.0 += s;
            } else {
                v.1 += s;
            }
        }
        v
    }

    /// Replaces each letter by the given image word (or its inverse).
    pub fn substitute(&self, x_img: &FreeWord, y_img: &FreeWord) -> FreeWord {
        let xi = x_img.inverse();
        let yi = y_img.inverse();
        let mut out = FreeWord::identity();
        for l in &self.letters {
            let img = match (l.gen, l.inv) {
                (0, false) => x_img,
                (0, true) => &xi,
                (_, false) => y_img,
                (_, true) => &yi,
            };
            for &m in &img.letters {
                out.push(m);
            }
        }
        out
    }

    /// Endpoint of the path starting at square `start`, where `x` moves to `r(i)` and `y` to `u(i)`.
    pub fn trace(
        &self,
        start: usize,
        r: &Permutation,
        u: &Permutation,
        r_inv: &Permutation,
        u_inv: &Permutation,
    ) -> usize {
        let mut s = start;
        for l in &self.letters {
            s = match (l.gen, l.inv) {
                (0, false) => r.apply(s),
                (0, true) => r_inv.apply(s),
                (_, false) => u.apply(s),
                (_, true) => u_inv.apply(s),
            };
        }
        s
    }

    /// The permutation `i ↦ i·w` (right action, letters applied left to right).
    pub fn monodromy(&self, r: &Permutation, u: &Permutation) -> Permutation {
        let (ri, ui) = (r.inverse(), u.inverse());
        let images = (0..r.degree())
            .map(|i| self.trace(i, r, u, &ri, &ui))
            .collect();
        Permutation::from_images_unchecked(images)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for l in &self.letters {
            let c = match (l.gen, l.inv) {
                (0, false) => 'x',
                (0, true) => 'X',
                (_, false) => 'y',
                (_, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
