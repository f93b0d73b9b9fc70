//! Hilbert series, Hilbert polynomials and lengths of zero-dimensional schemes.

use std::collections::HashMap;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::groebner::GradedIdeal;
use crate::poly::Monomial;

pub type Rational = Ratio<i128>;

/// Hilbert series `N(t) / (1-t)^n = Q(t) / (1-t)^dim` of `S/I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub nvars: usize,
    /// Coefficients of `N(t)`, lowest degree first.
    pub numerator: Vec<i64>,
    /// Coefficients of `Q(t)`, lowest degree first.
    pub reduced: Vec<i64>,
    /// Krull dimension of `S/I`.
    pub krull_dim: usize,
}

/// A polynomial in `n` with rational coefficients, lowest degree first and no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    pub coeffs: Vec<Rational>,
}

impl HilbertPolynomial {
    pub fn eval(&self, n: i64) -> Rational {
        let x = Rational::from_integer(n as i128);
        self.coeffs.iter().rev().fold(Rational::from_integer(0), |acc, c| acc * x + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }
}

fn binom_i(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

impl HilbertData {
    /// Projective dimension; `-1` for the empty scheme.
    pub fn dimension(&self) -> i64 {
        self.krull_dim as i64 - 1
    }

    pub fn degree(&self) -> i64 {
        self.reduced.iter().sum()
    }

    /// `dim_K (S/I)_m`
    pub fn hilbert_function(&self, m: i64) -> i64 {
        let n = self.nvars as i64;
        if n == 0 {
            return if m == 0 { self.numerator.first().copied().unwrap_or(0) } else { 0 };
        }
        self.numerator
            .iter()
            .enumerate()
            .map(|(k, &c)| c * binom_i(m - k as i64 + n - 1, n - 1))
            .sum()
    }

    pub fn hilbert_polynomial(&self) -> HilbertPolynomial {
        let d = self.krull_dim;
        let mut coeffs = vec![Rational::from_integer(0); d.max(1)];
        if d == 0 {
            return HilbertPolynomial { coeffs: vec![] };
        }
        let mut fact: i128 = 1;
        for i in 1..d as i128 {
            fact *= i;
        }
        for (k, &q) in self.reduced.iter().enumerate() {
            // q * C(m - k + d - 1, d - 1) = q / (d-1)! * prod_{i=1}^{d-1} (m - k + i)
            let mut p: Vec<i128> = vec![1];
            for i in 1..d as i128 {
                let a = i - k as i128;
                let mut next = vec![0i128; p.len() + 1];
                for (e, &c) in p.iter().enumerate() {
                    next[e] += c * a;
                    next[e + 1] += c;
                }
                p = next;
            }
            for (e, &c) in p.iter().enumerate() {
                coeffs[e] += Rational::new(c * q as i128, fact);
            }
        }
        while coeffs.last().map_or(false, |c| *c == Rational::from_integer(0)) {
            coeffs.pop();
        }
        HilbertPolynomial { coeffs }
    }

    /// Least `m0` such that the Hilbert function agrees with the polynomial
    /// for all `m >= m0`.
    pub fn regularity_index(&self) -> i64 {
        self.reduced.len() as i64 - self.krull_dim as i64
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shifted(a: &mut Vec<i64>, b: &[i64], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (j, &y) in b.iter().enumerate() {
        a[j + shift] += y;
    }
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| (m.degree(), m.packed()));
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|o| o.divides(g)) {
            out.push(g);
        }
    }
    out
}

/// Numerator of the Hilbert series of `S / (gens)` over `(1-t)^n`.
pub fn monomial_numerator(gens: &[Monomial]) -> Vec<i64> {
    let mut memo = HashMap::new();
    let mut v = numerator_rec(minimalize(gens.to_vec()), &mut memo);
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn numerator_rec(gens: Vec<Monomial>, memo: &mut HashMap<Vec<u128>, Vec<i64>>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    let coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(*b)));
    if coprime {
        let mut acc = vec![1i64];
        for g in &gens {
            let mut f = vec![0i64; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] -= 1;
            acc = poly_mul(&acc, &f);
        }
        return acc;
    }
    let key: Vec<u128> = gens.iter().map(|m| m.packed()).collect();
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut counts = [0usize; crate::poly::MAX_VARS];
    for g in &gens {
        for i in g.support() {
            counts[i] += 1;
        }
    }
    let var = (0..crate::poly::MAX_VARS).max_by_key(|&i| counts[i]).unwrap();
    let mut exps: Vec<u32> = gens
        .iter()
        .filter(|g| g.exponent(var) > 0 && g.degree() > g.exponent(var))
        .map(|g| g.exponent(var))
        .collect();
    exps.sort_unstable();
    let e = exps[exps.len() / 2];
    let mut pe = vec![0u32; crate::poly::MAX_VARS];
    pe[var] = e;
    let p = Monomial::from_exponents(&pe).unwrap();

    let mut plus = gens.clone();
    plus.push(p);
    let a = numerator_rec(minimalize(plus), memo);
    let quot: Vec<Monomial> = gens.iter().map(|g| g.div(g.gcd(p))).collect();
    let b = numerator_rec(minimalize(quot), memo);
    let mut out = a;
    poly_add_shifted(&mut out, &b, e as usize);
    memo.insert(key, out.clone());
    out
}

/// Hilbert data from a numerator over `(1-t)^nvars`.
pub fn hilbert_from_numerator(nvars: usize, numerator: Vec<i64>) -> HilbertData {
    let mut q = numerator.clone();
    let mut dim = nvars;
    while dim > 0 && q.iter().sum::<i64>() == 0 && q.iter().any(|&c| c != 0) {
        // divide by (1 - t)
        let mut out = vec![0i64; q.len() - 1];
        let mut acc = 0;
        for k in 0..q.len() - 1 {
            acc += q[k];
            out[k] = acc;
        }
        q = out;
        dim -= 1;
    }
    if q.iter().all(|&c| c == 0) {
        q = vec![0];
        dim = 0;
    }
    while q.len() > 1 && *q.last().unwrap() == 0 {
        q.pop();
    }
    HilbertData { nvars, numerator, reduced: q, krull_dim: dim }
}

/// Hilbert series of `S/I` for a standard-graded ideal.
pub fn hilbert_series(ideal: &GradedIdeal) -> Result<HilbertData> {
    if !ideal.ring().is_standard_graded() {
        return Err(Error::Hypothesis("Hilbert series requires the standard grading".into()));
    }
    let lms = ideal.gb().leading_monomials();
    Ok(hilbert_from_numerator(ideal.ring().nvars(), monomial_numerator(&lms)))
}

/// Length of the zero-dimensional scheme `V(I)`; zero when it is empty.
pub fn scheme_length(ideal: &GradedIdeal) -> Result<u64> {
    let h = hilbert_series(ideal)?;
    match h.krull_dim {
        0 => Ok(0),
        1 => Ok(h.degree() as u64),
        d => Err(Error::NotFinite { dimension: d as i64 - 1 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeField;
    use crate::poly::PolyRing;
    use proptest::prelude::*;

    // Count monomials of degree m outside the monomial ideal.
    fn count_standard(n: usize, gens: &[Monomial], m: u32) -> i64 {
        fn rec(n: usize, i: usize, left: u32, cur: &mut Vec<u32>, gens: &[Monomial], acc: &mut i64) {
            if i == n - 1 {
                cur.push(left);
                let mono = Monomial::from_exponents(cur).unwrap();
                if !gens.iter().any(|g| g.divides(mono)) {
                    *acc += 1;
                }
                cur.pop();
                return;
            }
            for e in 0..=left {
                cur.push(e);
                rec(n, i + 1, left - e, cur, gens, acc);
                cur.pop();
            }
        }
        let mut acc = 0;
        rec(n, 0, m, &mut Vec::new(), gens, &mut acc);
        acc
    }

    #[test]
    fn twisted_cubic_polynomial() {
        let r = PolyRing::standard(PrimeField::default(), 4).unwrap();
        let i = GradedIdeal::parse(r, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]).unwrap();
        let h = hilbert_series(&i).unwrap();
        assert_eq!(h.dimension(), 1);
        assert_eq!(h.degree(), 3);
        let hp = h.hilbert_polynomial();
        assert_eq!(hp.coeffs, vec![Rational::from_integer(1), Rational::from_integer(3)]);
        for m in 0..8 {
            assert_eq!(h.hilbert_function(m), 3 * m + 1);
        }
    }

    #[test]
    fn points_and_lengths() {
        let r = PolyRing::standard(PrimeField::default(), 3).unwrap();
        // three collinear points plus an embedded fat point: x0 * (x1^3 - x1*x2^2)
        let i = GradedIdeal::parse(r.clone(), &["x0", "x1^3 - x1*x2^2"]).unwrap();
        assert_eq!(scheme_length(&i).unwrap(), 3);
        let i = GradedIdeal::parse(r.clone(), &["x0", "x1"]).unwrap();
        assert_eq!(scheme_length(&i).unwrap(), 1);
        let i = GradedIdeal::parse(r.clone(), &["x0", "x1", "x2^2"]).unwrap();
        assert_eq!(scheme_length(&i).unwrap(), 0);
        let i = GradedIdeal::parse(r, &["x0"]).unwrap();
        assert_eq!(scheme_length(&i), Err(Error::NotFinite { dimension: 1 }));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn numerator_matches_count(gs in prop::collection::vec(prop::collection::vec(0u32..4, 4), 1..6)) {
            let gens: Vec<Monomial> = gs.iter().map(|e| Monomial::from_exponents(e).unwrap()).collect();
            let h = hilbert_from_numerator(4, monomial_numerator(&gens));
            for m in 0..9 {
                prop_assert_eq!(h.hilbert_function(m), count_standard(4, &gens, m as u32));
            }
            let hp = h.hilbert_polynomial();
            let m0 = h.regularity_index().max(0);
            for m in m0..m0 + 4 {
                prop_assert_eq!(hp.eval(m), Rational::from_integer(h.hilbert_function(m) as i128));
            }
        }
    }
}
