//! The free abelian group ℤᵈ with the standard basis as generators.

use std::marker::PhantomData;
use std::sync::Arc;

use smallvec::SmallVec;

use super::{
    all_trivial, DistanceFormula, Element, Generator, GeneratorAlphabet, GroupOracle, Membership, TrivialMembership,
};
use crate::error::{Error, Result};
use crate::scalar::ExactInt;

/// ℤᵈ with coordinate generators labelled `a, b, c, ...`.
#[derive(Clone, Debug)]
pub struct ZdGroup<T> {
    d: usize,
    alphabet: GeneratorAlphabet,
    _scalar: PhantomData<fn() -> T>,
}

impl<T: ExactInt> ZdGroup<T> {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 || d > 26 {
            return Err(Error::config(format!("ℤᵈ needs 1 ≤ d ≤ 26, got {d}")));
        }
        let names: Vec<String> = (0..d).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        Ok(Self {
            d,
            alphabet: GeneratorAlphabet::paired(&names),
            _scalar: PhantomData,
        })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn encode(&self, coords: &[T]) -> Element {
        assert_eq!(coords.len(), self.d);
        let mut out = SmallVec::new();
        for c in coords {
            c.encode_into(&mut out);
        }
        Element(out)
    }

    pub fn decode(&self, x: &Element) -> Vec<T> {
        let mut coords = Vec::with_capacity(self.d);
        let mut bytes = x.as_bytes();
        for _ in 0..self.d {
            let (v, used) = T::decode_from(bytes);
            coords.push(v);
            bytes = &bytes[used..];
        }
        coords
    }

    /// Element with the given machine-integer coordinates.
    pub fn element(&self, coords: &[i64]) -> Element {
        let v: Vec<T> = coords.iter().map(|&c| T::from_i64_exact(c)).collect();
        self.encode(&v)
    }

    fn coords_i128(&self, x: &Element) -> Vec<i128> {
        self.decode(x)
            .iter()
            .map(|c| c.to_i128().expect("ℤᵈ coordinate exceeds i128"))
            .collect()
    }
}

impl<T: ExactInt> GroupOracle for ZdGroup<T> {
    fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    fn identity(&self) -> Element {
        self.encode(&vec![T::zero(); self.d])
    }

    fn right_multiply(&self, g: &Element, s: Generator) -> Element {
        let mut c = self.decode(g);
        let i = s.index() / 2;
        c[i] = if s.index().is_multiple_of(2) {
            c[i].add_exact(&T::one())
        } else {
            c[i].sub_exact(&T::one())
        };
        self.encode(&c)
    }

    fn exact_word_length(&self, g: &Element) -> Option<u64> {
        self.decode(g).iter().map(|c| c.abs().to_u64()).sum::<Option<u64>>()
    }

    fn render(&self, g: &Element) -> String {
        let parts: Vec<String> = self.decode(g).iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(","))
    }

    fn subgroup_membership(&self, gens: &[Element]) -> Result<Box<dyn Membership>> {
        if all_trivial(self, gens) {
            return Ok(Box::new(TrivialMembership(self.identity())));
        }
        let rows: Vec<Vec<i128>> = gens.iter().map(|g| self.coords_i128(g)).collect();
        Ok(Box::new(LatticeMembership {
            group: self.clone(),
            basis: echelon_basis(rows, self.d),
        }))
    }

    /// `zd-coordinate`: H is spanned by a set of coordinate axes; the
    /// distance is the L¹ norm of the remaining coordinates.
    fn distance_formula(&self, tag: &str, gens: &[Element]) -> Result<DistanceFormula> {
        if tag != "zd-coordinate" {
            return Err(Error::config(format!("ℤᵈ has no distance formula {tag:?}")));
        }
        let mut axes = vec![false; self.d];
        for g in gens {
            let c = self.coords_i128(g);
            let nonzero: Vec<usize> = (0..self.d).filter(|&i| c[i] != 0).collect();
            match nonzero.as_slice() {
                [] => {}
                [i] if c[*i].abs() == 1 => axes[*i] = true,
                _ => {
                    return Err(Error::config(
                        "zd-coordinate needs every generator to be a unit coordinate vector",
                    ))
                }
            }
        }
        let group = self.clone();
        Ok(Arc::new(move |x: &Element| {
            group
                .decode(x)
                .iter()
                .zip(&axes)
                .filter(|(_, &on_axis)| !on_axis)
                .map(|(c, _)| c.abs().to_u64().expect("coordinate fits u64"))
                .sum()
        }))
    }
}

/// Row echelon basis of the integer lattice spanned by `rows`, computed
/// by gcd elimination column by column.
pub(crate) fn echelon_basis(mut rows: Vec<Vec<i128>>, d: usize) -> Vec<(usize, Vec<i128>)> {
    let mut basis = Vec::new();
    for col in 0..d {
        loop {
            rows.retain(|r| r.iter().any(|&v| v != 0));
            let mut with_col: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if with_col.is_empty() {
                break;
            }
            with_col.sort_by_key(|&i| rows[i][col].abs());
            let p = with_col[0];
            if with_col.len() == 1 {
                let mut pivot = rows.swap_remove(p);
                if pivot[col] < 0 {
                    pivot.iter_mut().for_each(|v| *v = -*v);
                }
                basis.push((col, pivot));
                break;
            }
            let pivot = rows[p].clone();
            for &i in &with_col[1..] {
                let q = rows[i][col].div_euclid(pivot[col]);
                for (v, pv) in rows[i].iter_mut().zip(&pivot) {
                    *v -= q * pv;
                }
            }
        }
    }
    basis
}

struct LatticeMembership<T> {
    group: ZdGroup<T>,
    basis: Vec<(usize, Vec<i128>)>,
}

impl<T: ExactInt> Membership for LatticeMembership<T> {
    fn contains(&self, x: &Element) -> bool {
        let mut v = self.group.coords_i128(x);
        let mut next = 0;
        for col in 0..v.len() {
            if next < self.basis.len() && self.basis[next].0 == col {
                let row = &self.basis[next].1;
                if v[col] % row[col] != 0 {
                    return false;
                }
                let q = v[col] / row[col];
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= q * b;
                }
                next += 1;
            } else if v[col] != 0 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{parse_element, word_to_element};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn z2() -> ZdGroup<i64> {
        ZdGroup::new(2).unwrap()
    }

    #[test]
    fn word_example() {
        let g = z2();
        assert_eq!(parse_element(&g, "a a b a⁻¹").unwrap(), g.element(&[1, 1]));
        assert_eq!(g.render(&g.element(&[1, 1])), "(1,1)");
    }

    #[test]
    fn axis_formula() {
        let g = z2();
        let f = g.distance_formula("zd-coordinate", &[g.element(&[1, 0])]).unwrap();
        assert_eq!(f(&g.element(&[3, 4])), 4);
        assert_eq!(f(&g.element(&[-7, 0])), 0);
        assert!(g.distance_formula("zd-coordinate", &[g.element(&[2, 0])]).is_err());
    }

    #[test]
    fn lattice_membership() {
        let g = z2();
        let m = g
            .subgroup_membership(&[g.element(&[2, 0]), g.element(&[1, 2])])
            .unwrap();
        assert!(m.contains(&g.element(&[0, 0])));
        assert!(m.contains(&g.element(&[3, 2])));
        assert!(m.contains(&g.element(&[0, 4])));
        assert!(!m.contains(&g.element(&[1, 0])));
        assert!(!m.contains(&g.element(&[0, 2])));
        let axis = g.subgroup_membership(&[g.element(&[1, 0])]).unwrap();
        assert!(axis.contains(&g.element(&[-5, 0])));
        assert!(!axis.contains(&g.element(&[0, 1])));
    }

    proptest! {
        #[test]
        fn lattice_membership_matches_span(
            a in -3i64..4, b in -3i64..4, c in -3i64..4, e in -3i64..4,
            m in -4i64..5, n in -4i64..5,
            px in -6i64..7, py in -6i64..7,
        ) {
            let g = z2();
            let gens = [g.element(&[a, b]), g.element(&[c, e])];
            let mem = g.subgroup_membership(&gens).unwrap();
            prop_assert!(mem.contains(&g.element(&[m * a + n * c, m * b + n * e])));
            let det = a * e - b * c;
            if det != 0 {
                // Cramer: (px,py) is in the span iff both coefficients are integers.
                let in_span = (px * e - py * c) % det == 0 && (a * py - b * px) % det == 0;
                prop_assert_eq!(mem.contains(&g.element(&[px, py])), in_span);
            }
        }

        #[test]
        fn associativity_and_scalars_agree(u in proptest::collection::vec(0u8..6, 0..20),
                                           v in proptest::collection::vec(0u8..6, 0..20)) {
            let g3: ZdGroup<i64> = ZdGroup::new(3).unwrap();
            let big: ZdGroup<BigInt> = ZdGroup::new(3).unwrap();
            let u: Vec<Generator> = u.into_iter().map(Generator).collect();
            let v: Vec<Generator> = v.into_iter().map(Generator).collect();
            let uv: Vec<Generator> = u.iter().chain(&v).copied().collect();
            let whole = word_to_element(&g3, &uv).unwrap();
            let split = crate::group::multiply_word(&g3, &word_to_element(&g3, &u).unwrap(), &v);
            prop_assert_eq!(&whole, &split);
            prop_assert_eq!(whole, word_to_element(&big, &uv).unwrap());
        }
    }
}
