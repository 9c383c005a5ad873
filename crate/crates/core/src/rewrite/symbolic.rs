//! Syllable words over `{a, b, c}` with big-integer exponents, and the
//! distortion witness in `⟨a, b, c | b a b⁻¹ = a², c b c⁻¹ = b²⟩`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `n` accepted by [`gromov_witness`] unless a cap is given.
pub const DEFAULT_WITNESS_CAP: u32 = 6;

/// A word as syllables `x^e`: neighbouring syllables have different
/// letters and no exponent is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolicWord {
    syllables: Vec<(char, BigInt)>,
}

impl SymbolicWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn syllable(letter: char, exp: impl Into<BigInt>) -> Self {
        let mut w = Self::new();
        w.push(letter, exp.into());
        w
    }

    pub fn syllables(&self) -> &[(char, BigInt)] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Appends `letter^exp`, merging with the last syllable.
    pub fn push(&mut self, letter: char, exp: BigInt) {
        if exp.is_zero() {
            return;
        }
        match self.syllables.last_mut() {
            Some((l, e)) if *l == letter => {
                *e += exp;
                if e.is_zero() {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((letter, exp)),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (l, e) in &other.syllables {
            out.push(*l, e.clone());
        }
        out
    }

    /// Letters counted with multiplicity.
    pub fn letter_length(&self) -> BigInt {
        self.syllables.iter().map(|(_, e)| e.abs()).sum()
    }

    /// Applies one conjugation law at the first applicable position:
    /// `y^s x^k y^-s → x^(2k)` for `s ≥ 1` (forward law), and
    /// `y^-s x^(2k) y^s → x^k` (inverse law), where `(y, x)` is `(b, a)`
    /// or `(c, b)`. One power of `y` is peeled from each side. The
    /// syllables are scanned from the inside out so that the innermost
    /// conjugation is resolved first.
    pub fn apply_law(&mut self) -> bool {
        let n = self.syllables.len();
        for i in 1..n.saturating_sub(1) {
            let (y, s) = &self.syllables[i - 1];
            let (x, k) = &self.syllables[i];
            let (y2, s2) = &self.syllables[i + 1];
            let law = matches!((*y, *x), ('b', 'a') | ('c', 'b'));
            if !law || y != y2 || s.signum() == s2.signum() {
                continue;
            }
            let new_k = if s.is_positive() {
                k * 2
            } else if k.is_even() {
                k / 2
            } else {
                continue;
            };
            let one = BigInt::one();
            let (left, right) = if s.is_positive() {
                (s - &one, s2 + &one)
            } else {
                (s + &one, s2 - &one)
            };
            let (x, y) = (*x, *y);
            let mut out = SymbolicWord::new();
            for (l, e) in &self.syllables[..i - 1] {
                out.push(*l, e.clone());
            }
            out.push(y, left);
            out.push(x, new_k);
            out.push(y, right);
            for (l, e) in &self.syllables[i + 2..] {
                out.push(*l, e.clone());
            }
            *self = out;
            return true;
        }
        false
    }

    /// Applies laws until none applies. Returns the number of applications.
    pub fn rewrite_fully(&mut self, max_steps: u64) -> Result<u64> {
        let mut steps = 0;
        while self.apply_law() {
            steps += 1;
            if steps > max_steps {
                return Err(Error::budget(format!("symbolic rewriting exceeded {max_steps} steps")));
            }
        }
        Ok(steps)
    }
}

impl fmt::Display for SymbolicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|(l, e)| if e.is_one() { l.to_string() } else { format!("{l}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Result of [`gromov_witness`].
#[derive(Clone, Debug, Serialize)]
pub struct GromovWitness {
    pub n: u32,
    /// Letter-by-letter witness `c^n b c^-n a c^n b^-1 c^-n`.
    pub witness: String,
    pub witness_length: u64,
    /// The rewritten form, `a^(2^(2^n))` when verified.
    pub target: String,
    #[serde(serialize_with = "as_string")]
    pub target_exponent: BigInt,
    pub law_applications: u64,
    pub verified: bool,
}

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Builds the witness word for `n` and rewrites it with the two
/// conjugation laws alone.
pub fn gromov_witness(n: u32, cap: u32) -> Result<GromovWitness> {
    if n > cap {
        return Err(Error::invalid(format!("n = {n} exceeds the witness cap {cap}")));
    }
    let nn = BigInt::from(n);
    let letters: Vec<(char, i32)> = [('c', 1), ('b', 1), ('c', -1), ('a', 1), ('c', 1), ('b', -1), ('c', -1)]
        .iter()
        .flat_map(|&(l, e)| {
            let reps = if l == 'c' { n as usize } else { 1 };
            std::iter::repeat_n((l, e), reps)
        })
        .collect();
    let witness = letters
        .iter()
        .map(|&(l, e)| if e == 1 { l.to_string() } else { format!("{l}^-1") })
        .collect::<Vec<_>>()
        .join(" ");
    let mut word = SymbolicWord::new();
    for &(l, e) in &letters {
        word.push(l, BigInt::from(e));
    }
    let law_applications = word.rewrite_fully(1 << 20)?;
    let target_exponent = BigInt::from(2u32).pow(1u32 << n);
    let expected = SymbolicWord::syllable('a', target_exponent.clone());
    debug_assert_eq!(BigInt::from(letters.len()), 4 * nn + 3);
    Ok(GromovWitness {
        n,
        witness,
        witness_length: letters.len() as u64,
        target: word.to_string(),
        verified: word == expected,
        target_exponent,
        law_applications,
    })
}
