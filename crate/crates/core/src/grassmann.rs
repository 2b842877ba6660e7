//! A small exterior (Grassmann) algebra over complex coefficients.
//!
//! Elements are stored as sparse maps from generator bitmasks to
//! coefficients; the canonical monomial for a mask is the product of
//! its generators in ascending index order. This is enough to evaluate
//! the fermionic determinant expansions used by the index density:
//! build an even element, exponentiate (it is nilpotent), and read off
//! the top coefficient.

use alloc::collections::BTreeMap;

use crate::Complex;

#[derive(Debug, Clone, Default)]
pub(crate) struct Element {
    terms: BTreeMap<u32, Complex>,
}

/// Parity of the swaps needed to merge the canonical monomials of two
/// disjoint masks: each generator of `b` passes the generators of `a`
/// with larger index.
fn merge_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        swaps += (a >> (bit + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl Element {
    pub(crate) fn zero() -> Self {
        Self::default()
    }

    pub(crate) fn scalar(value: Complex) -> Self {
        let mut e = Self::default();
        e.add_term(0, value);
        e
    }

    /// Single generator `index`.
    pub(crate) fn generator(index: u32) -> Self {
        let mut e = Self::default();
        e.add_term(1 << index, Complex::new(1.0, 0.0));
        e
    }

    pub(crate) fn add_term(&mut self, mask: u32, value: Complex) {
        if value.re == 0.0 && value.im == 0.0 {
            return;
        }
        let slot = self.terms.entry(mask).or_insert(Complex::new(0.0, 0.0));
        *slot += value;
        if slot.re == 0.0 && slot.im == 0.0 {
            self.terms.remove(&mask);
        }
    }

    pub(crate) fn add_assign(&mut self, other: &Element) {
        for (&mask, &value) in &other.terms {
            self.add_term(mask, value);
        }
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        for value in self.terms.values_mut() {
            *value *= factor;
        }
    }

    pub(crate) fn scale_complex(&mut self, factor: Complex) {
        for value in self.terms.values_mut() {
            *value *= factor;
        }
    }

    pub(crate) fn mul(&self, other: &Element) -> Element {
        let mut out = Element::zero();
        for (&ma, &ca) in &self.terms {
            for (&mb, &cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                out.add_term(ma | mb, ca * cb * merge_sign(ma, mb));
            }
        }
        out
    }

    pub(crate) fn coefficient(&self, mask: u32) -> Complex {
        self.terms
            .get(&mask)
            .copied()
            .unwrap_or(Complex::new(0.0, 0.0))
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `exp(self)` for a nilpotent element (no scalar part required by
    /// the caller; terms of degree 0 would make this diverge).
    pub(crate) fn exp(&self) -> Element {
        debug_assert!(self.coefficient(0).norm() == 0.0);
        let mut out = Element::scalar(Complex::new(1.0, 0.0));
        let mut power = Element::scalar(Complex::new(1.0, 0.0));
        let mut k = 1.0;
        loop {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            power.scale(1.0 / k);
            out.add_assign(&power);
            k += 1.0;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    #[test]
    fn generators_anticommute() {
        let a = Element::generator(0);
        let b = Element::generator(3);
        let ab = a.mul(&b);
        let ba = b.mul(&a);
        assert_eq!(ab.coefficient(0b1001), c(1.0));
        assert_eq!(ba.coefficient(0b1001), c(-1.0));
        assert!(a.mul(&a).is_zero());
    }

    #[test]
    fn determinant_via_berezin() {
        // det of an n x n matrix equals the top coefficient of
        // prod_i (sum_j m_ij psi_j) in ascending row order
        let m = [
            [c(2.0), c(1.0), c(0.5)],
            [c(-1.0), c(3.0), c(0.0)],
            [c(0.0), c(4.0), c(1.0)],
        ];
        let mut prod = Element::scalar(c(1.0));
        for row in &m {
            let mut linear = Element::zero();
            for (j, &mij) in row.iter().enumerate() {
                linear.add_term(1 << j, mij);
            }
            prod = prod.mul(&linear);
        }
        // det = 2(3-0) - 1(-1-0) + 0.5(-4-0) = 6 + 1 - 2 = 5
        assert_eq!(prod.coefficient(0b111), c(5.0));
    }

    #[test]
    fn exp_of_even_element() {
        // p = a b with a, b anticommuting: exp(p) = 1 + p
        let p = Element::generator(0).mul(&Element::generator(1));
        let e = p.exp();
        assert_eq!(e.coefficient(0), c(1.0));
        assert_eq!(e.coefficient(0b11), c(1.0));
        // (g0 g1 + g2 g3): exp has the product term with coefficient 1
        let mut q = p.clone();
        q.add_assign(&Element::generator(2).mul(&Element::generator(3)));
        let e = q.exp();
        assert_eq!(e.coefficient(0b1111), c(1.0));
    }
}
