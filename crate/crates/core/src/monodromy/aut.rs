use std::fmt;

use crate::exact::{FreeWord, Letter, Permutation};
use crate::modular::{Mat2Z, StLetter, WordST};

/// An endomorphism of the free group `F₂ = ⟨x, y⟩`, stored by the images of `x` and `y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Aut2 {
    pub x: FreeWord,
    pub y: FreeWord,
}

impl Aut2 {
    pub fn identity() -> Self {
        Aut2 {
            x: FreeWord::x(),
            y: FreeWord::y(),
        }
    }

    pub fn new(x: FreeWord, y: FreeWord) -> Self {
        Aut2 { x, y }
    }

    /// The fixed lift of a single letter.
    ///
    /// `σ_T: x ↦ x, y ↦ yx` and `σ_S: x ↦ y, y ↦ x⁻¹`; their abelianizations are `T` and `S`.
    pub fn lift_letter(l: StLetter) -> Self {
        let x = || FreeWord::from_letters([Letter::X]);
        let y = || FreeWord::from_letters([Letter::Y]);
        match l {
            StLetter::T => Aut2::new(x(), FreeWord::from_letters([Letter::Y, Letter::X])),
            StLetter::TInv => Aut2::new(x(), FreeWord::from_letters([Letter::Y, Letter::XI])),
            StLetter::S => Aut2::new(y(), FreeWord::from_letters([Letter::XI])),
            StLetter::SInv => Aut2::new(FreeWord::from_letters([Letter::YI]), x()),
        }
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(&self.x, &self.y)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Aut2) -> Aut2 {
        Aut2 {
            x: self.apply(&other.x),
            y: self.apply(&other.y),
        }
    }

    /// Inner automorphism `w ↦ v w v⁻¹`.
    pub fn conjugation(v: &FreeWord) -> Aut2 {
        let vi = v.inverse();
        Aut2 {
            x: v.mul(&FreeWord::x()).mul(&vi),
            y: v.mul(&FreeWord::y()).mul(&vi),
        }
    }

    /// Action on `H₁(torus) = ℤ²`; columns are the exponent sums of the images of `x` and `y`.
    pub fn abelianization(&self) -> Mat2Z {
        let (a, c) = self.x.abelianize();
        let (b, d) = self.y.abelianize();
        Mat2Z::from_i64(a, b, c, d)
    }

    /// The monodromy pair `(m(φ(x)), m(φ(y)))` for the covering with monodromy `x ↦ r, y ↦ u`.
    pub fn pull_monodromy(&self, r: &Permutation, u: &Permutation) -> (Permutation, Permutation) {
        (self.x.monodromy(r, u), self.y.monodromy(r, u))
    }
}

impl fmt::Display for Aut2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x -> {}, y -> {}", self.x, self.y)
    }
}

/// `φ_w = φ_{l₁} ∘ ⋯ ∘ φ_{l_k}` for `w = l₁⋯l_k`.
pub fn lift_to_aut(w: &WordST) -> Aut2 {
    w.letters().iter().fold(Aut2::identity(), |acc, &l| {
        acc.compose(&Aut2::lift_letter(l))
    })
}
