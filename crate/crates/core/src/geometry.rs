//! Projective varieties from recipes: rational normal scrolls, divisors of
//! class `H + kF` on scrolls, images of bihomogeneous parametrizations and
//! linear projections. Also hyperplane sections and secant-line lengths.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::PrimeField;
use crate::error::{Error, Result};
use crate::groebner::{eliminate_polys, saturate_by_variable, saturate_irrelevant, GradedIdeal};
use crate::hilbert::{hilbert_series, scheme_length};
use crate::linalg::{dense_rank, kernel, rref};
use crate::poly::{Monomial, PolyRing, Polynomial};

/// How many fresh seeds a "general" choice may consume before giving up.
pub const MAX_RETRIES: usize = 16;

/// A linear subspace of `P^{n-1}`, given by independent linear forms.
#[derive(Clone, Debug)]
pub struct LinearSubspace {
    ring: PolyRing,
    forms: Vec<Polynomial>,
}

impl LinearSubspace {
    pub fn new(ring: &PolyRing, forms: Vec<Polynomial>) -> Result<Self> {
        let ring = ring.standard_copy();
        let mut rows = Vec::new();
        for f in &forms {
            if f.is_zero() || f.homogeneous_degree(&ring) != Some(1) {
                return Err(Error::Degenerate(format!("not a linear form: {}", ring.fmt_poly(f))));
            }
            rows.push(linear_coeffs(&ring, f));
        }
        if dense_rank(ring.field(), &rows) != rows.len() {
            return Err(Error::Degenerate("linear forms are dependent".into()));
        }
        let forms = forms.iter().map(|f| f.resort(&ring)).collect();
        Ok(LinearSubspace { ring, forms })
    }

    /// The span of the given points (coordinate vectors).
    pub fn span(ring: &PolyRing, points: &[Vec<u32>]) -> Result<Self> {
        let ring = ring.standard_copy();
        let n = ring.nvars();
        let forms = kernel(ring.field(), points, n).into_iter().map(|v| linear_form(&ring, &v)).collect();
        LinearSubspace::new(&ring, forms)
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn forms(&self) -> &[Polynomial] {
        &self.forms
    }

    /// Projective dimension; `-1` for the empty subspace.
    pub fn dim(&self) -> i64 {
        self.ring.nvars() as i64 - 1 - self.forms.len() as i64
    }

    pub fn ideal(&self) -> GradedIdeal {
        GradedIdeal::new(self.ring.clone(), self.forms.clone()).expect("linear forms are homogeneous")
    }

    /// A basis of the underlying vector space.
    pub fn points(&self) -> Vec<Vec<u32>> {
        let rows: Vec<Vec<u32>> = self.forms.iter().map(|f| linear_coeffs(&self.ring, f)).collect();
        kernel(self.ring.field(), &rows, self.ring.nvars())
    }
}

impl fmt::Display for LinearSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let forms: Vec<String> = self.forms.iter().map(|p| self.ring.fmt_poly(p)).collect();
        write!(f, "V({})", forms.join(", "))
    }
}

fn linear_coeffs(ring: &PolyRing, f: &Polynomial) -> Vec<u32> {
    let mut v = vec![0u32; ring.nvars()];
    for &(m, c) in f.terms() {
        if let Some(i) = m.support().next() {
            v[i] = c;
        }
    }
    v
}

fn linear_form(ring: &PolyRing, coeffs: &[u32]) -> Polynomial {
    let terms = coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (Monomial::var(i), c)).collect();
    Polynomial::from_terms(ring, terms)
}

fn random_vec(rng: &mut ChaCha8Rng, field: PrimeField, n: usize) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..field.characteristic())).collect()
}

/// A seeded random binary form of degree `deg` in the ring `K[s, t]`.
pub fn random_binary_form(st: &PolyRing, deg: u32, rng: &mut ChaCha8Rng) -> Polynomial {
    let f = st.field();
    let terms = (0..=deg)
        .map(|j| (Monomial::from_exponents(&[deg - j, j]).unwrap(), rng.gen_range(1..f.characteristic())))
        .collect();
    Polynomial::from_terms(st, terms)
}

fn binary_ring(field: PrimeField) -> PolyRing {
    PolyRing::new(field, vec!["s".into(), "t".into()]).unwrap()
}

/// Ideal of `S(a_1, ..., a_k)`: the 2×2 minors of the matrix made of the
/// Hankel blocks `[x_{i,0} .. x_{i,a_i-1}; x_{i,1} .. x_{i,a_i}]`.
pub fn scroll_ideal(field: PrimeField, exps: &[u32]) -> Result<GradedIdeal> {
    if exps.is_empty() || exps.iter().all(|&a| a == 0) {
        return Err(Error::Degenerate("scroll exponents all zero".into()));
    }
    let n: u32 = exps.iter().map(|a| a + 1).sum();
    let ring = PolyRing::standard(field, n as usize)?;
    let mut cols: Vec<(usize, usize)> = Vec::new();
    let mut off = 0usize;
    for &a in exps {
        for l in 0..a as usize {
            cols.push((off + l, off + l + 1));
        }
        off += a as usize + 1;
    }
    let mut gens = Vec::new();
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let (a, b) = (cols[i], cols[j]);
            let m = ring.var(a.0).mul(&ring, &ring.var(b.1)).sub(&ring, &ring.var(a.1).mul(&ring, &ring.var(b.0)));
            if !m.is_zero() && !gens.contains(&m) {
                gens.push(m);
            }
        }
    }
    GradedIdeal::new(ring, gens)
}

/// Coordinates of the scroll as forms in `s, t, u_1, ..., u_k` (weights
/// `1, 1, W - a_i` with `W = max a_i + 1`).
pub fn scroll_parametrization(field: PrimeField, exps: &[u32]) -> Result<(PolyRing, Vec<Polynomial>)> {
    let mut names = vec!["s".to_string(), "t".to_string()];
    names.extend((0..exps.len()).map(|i| format!("u{i}")));
    let w = exps.iter().max().copied().unwrap_or(0) + 1;
    let mut weights = vec![1, 1];
    weights.extend(exps.iter().map(|a| w - a));
    let ring = PolyRing::new(field, names)?.with_weights(weights);
    let mut forms = Vec::new();
    for (i, &a) in exps.iter().enumerate() {
        for l in 0..=a {
            let mut e = vec![0u32; exps.len() + 2];
            e[0] = a - l;
            e[1] = l;
            e[2 + i] = 1;
            forms.push(Polynomial::monomial(Monomial::from_exponents(&e)?, 1));
        }
    }
    Ok((ring, forms))
}

/// Weights on the parameters making every form homogeneous of one common
/// weight, searched among small positive integers.
pub fn infer_weights(params: &PolyRing, forms: &[Polynomial]) -> Option<Vec<u32>> {
    let n = params.nvars();
    let std = vec![1u32; n];
    let uniform = |w: &[u32]| -> bool {
        let mut d = None;
        forms.iter().all(|f| {
            f.terms().iter().all(|t| {
                let e = t.0.weighted_degree(w);
                *d.get_or_insert(e) == e
            })
        })
    };
    if uniform(&std) {
        return Some(std);
    }
    // equations (m - m')·w = 0 over the rationals, solved by exact elimination
    let first = forms.iter().find(|f| !f.is_zero())?.lm();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for f in forms {
        for t in f.terms() {
            let row: Vec<i64> = (0..n).map(|i| t.0.exponent(i) as i64 - first.exponent(i) as i64).collect();
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    let basis = rational_kernel(&rows, n);
    if basis.is_empty() || basis.len() > 3 {
        return None;
    }
    let range = -12..=12i64;
    let mut best: Option<Vec<u32>> = None;
    let combos: Vec<Vec<i64>> = match basis.len() {
        1 => range.clone().map(|a| vec![a]).collect(),
        2 => range.clone().flat_map(|a| range.clone().map(move |b| vec![a, b])).collect(),
        _ => range
            .clone()
            .flat_map(|a| range.clone().flat_map(move |b| (-12..=12i64).map(move |c| vec![a, b, c])))
            .collect(),
    };
    for c in combos {
        {
            let mut w = vec![0i64; n];
            for (k, v) in basis.iter().enumerate() {
                for i in 0..n {
                    w[i] += c[k] * v[i];
                }
            }
            if w.iter().all(|&x| x > 0) {
                let g = w.iter().fold(0i128, |acc, &x| gcd_i128(acc, x as i128)) as i64;
                let w: Vec<u32> = w.iter().map(|&x| (x / g) as u32).collect();
                let better = match &best {
                    None => true,
                    Some(b) => w.iter().sum::<u32>() < b.iter().sum::<u32>(),
                };
                if better && uniform(&w) {
                    best = Some(w);
                }
            }
        }
    }
    best
}

// Integer basis of the rational kernel of an integer matrix.
fn rational_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    use num_rational::Ratio;
    let mut m: Vec<Vec<Ratio<i128>>> =
        rows.iter().map(|r| r.iter().map(|&x| Ratio::from_integer(x as i128)).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&i| m[i][col] != Ratio::from_integer(0)) else { continue };
        m.swap(row, p);
        let inv = Ratio::from_integer(1) / m[row][col];
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for i in 0..m.len() {
            if i != row && m[i][col] != Ratio::from_integer(0) {
                let f = m[i][col];
                for j in 0..n {
                    let v = m[row][j];
                    m[i][j] -= f * v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Ratio::from_integer(0i128); n];
        v[free] = Ratio::from_integer(1);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free];
        }
        let den = v.iter().fold(1i128, |acc, x| lcm_i128(acc, *x.denom()));
        out.push(v.iter().map(|x| (x * Ratio::from_integer(den)).to_integer() as i64).collect());
    }
    out
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i128(b, a % b)
    }
}

fn lcm_i128(a: i128, b: i128) -> i128 {
    (a / gcd_i128(a, b) * b).abs()
}

/// Image of a parametrization, flagged when it lies in a hyperplane.
#[derive(Clone, Debug)]
pub struct ParametrizedImage {
    pub ideal: GradedIdeal,
    pub degenerate: bool,
    pub weights: Vec<u32>,
}

/// Ideal of the closure of the image of `params -> P^{n-1}` given by `forms`:
/// eliminate the parameters from `⟨x_i - form_i⟩`. When no grading makes the
/// forms homogeneous of a common weight, a scaling parameter is added and the
/// original parameters get weight zero.
pub fn parametrized_image_ideal(params: &PolyRing, forms: &[Polynomial]) -> Result<ParametrizedImage> {
    if forms.len() < 3 {
        return Err(Error::Hypothesis("at least three forms are needed".into()));
    }
    let k = params.nvars();
    let n = forms.len();
    let (extra, weights) = match infer_weights(params, forms) {
        Some(w) => (false, w),
        None => (true, vec![0; k]),
    };
    let kk = k + extra as usize;
    let mut names: Vec<String> = params.names().to_vec();
    if extra {
        names.push("_lambda".into());
    }
    names.extend((0..n).map(|i| format!("x{i}")));
    let target_weight = if extra { 1 } else { forms.iter().map(|f| f.max_weight(&params.with_weights(weights.clone()))).max().unwrap_or(1) };
    let mut all_w = weights.clone();
    if extra {
        all_w.push(1);
    }
    all_w.extend(std::iter::repeat(target_weight).take(n));
    let big = PolyRing::new(params.field(), names)?.with_weights(all_w);
    let lift: Vec<usize> = (0..k).collect();
    let mut gens = Vec::with_capacity(n);
    for (i, f) in forms.iter().enumerate() {
        let mut g = f.permute(&big, &lift);
        if extra {
            g = g.mul(&big, &big.var(k));
        }
        gens.push(big.var(kk + i).sub(&big, &g));
    }
    let block: Vec<usize> = (0..kk).collect();
    let ideal = eliminate_polys(&big, &gens, &block)?.standard_graded()?;
    let degenerate = ideal.initial_degree() == Some(1);
    Ok(ParametrizedImage { ideal, degenerate, weights })
}

/// Degree of the gcd of binary forms in `K[s, t]`, i.e. the number of
/// common roots on `P^1` with multiplicity. `None` when all forms vanish.
pub fn binary_gcd_degree(st: &PolyRing, forms: &[Polynomial]) -> Option<u32> {
    let f = st.field();
    let mut g: Option<Vec<u32>> = None;
    let mut at_infinity = u32::MAX;
    for form in forms.iter().filter(|p| !p.is_zero()) {
        let n = form.total_degree();
        // coefficients of form(1, t), low degree first
        let mut c = vec![0u32; n as usize + 1];
        for &(m, v) in form.terms() {
            c[m.exponent(1) as usize] = v;
        }
        trim(&mut c);
        at_infinity = at_infinity.min(n - (c.len() as u32 - 1));
        g = Some(match g {
            None => c,
            Some(h) => poly_gcd(f, h, c),
        });
    }
    g.map(|g| g.len() as u32 - 1 + at_infinity)
}

fn trim(c: &mut Vec<u32>) {
    while c.len() > 1 && *c.last().unwrap() == 0 {
        c.pop();
    }
}

fn poly_gcd(f: PrimeField, mut a: Vec<u32>, mut b: Vec<u32>) -> Vec<u32> {
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        // a mod b
        let inv = f.inv(*b.last().unwrap()).unwrap();
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let q = f.mul(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (i, &bv) in b.iter().enumerate() {
                a[shift + i] = f.sub(a[shift + i], f.mul(q, bv));
            }
            a.pop();
            if a.is_empty() {
                a.push(0);
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn check_sections(field: PrimeField, exps: &[u32], k: u32, sections: &[Polynomial]) -> Result<()> {
    let m = exps.len();
    if sections.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: sections.len() });
    }
    if m < 2 {
        return Err(Error::UnsupportedRecipe("divisors need a scroll of dimension at least two".into()));
    }
    let st = binary_ring(field);
    for (i, g) in sections.iter().enumerate() {
        if !g.is_zero() && g.homogeneous_degree(&st) != Some(exps[i] + k) {
            return Err(Error::Hypothesis(format!("section g{i} must be a form of degree {}", exps[i] + k)));
        }
    }
    match binary_gcd_degree(&st, sections) {
        None => return Err(Error::NonReducedRecipe("the section is identically zero".into())),
        Some(0) => {}
        Some(e) => {
            return Err(Error::NonReducedRecipe(format!("the section vanishes on {e} ruling(s) of the scroll")))
        }
    }
    Ok(())
}

/// Ideal of the divisor of class `H + kF` on `S(a_1, ..., a_m)` cut out by
/// the relative linear form `φ = Σ g_i u_i`, where `g_i ∈ K[s, t]` has
/// degree `a_i + k`.
///
/// With `u_p` a block of smallest positive `a_p`, the form of degree `k + 1`
/// restricting to `φ · u_p^k · s^{k(a_p - 1)}` cuts the scroll in the divisor
/// plus components inside `V(x_{p,0})`; saturating by `x_{p,0}` removes them.
pub fn divisor_on_scroll_ideal(field: PrimeField, exps: &[u32], k: u32, sections: &[Polynomial]) -> Result<GradedIdeal> {
    check_sections(field, exps, k, sections)?;
    let scroll = scroll_ideal(field, exps)?;
    let ring = scroll.ring().clone();
    let offsets: Vec<usize> = exps.iter().scan(0usize, |acc, &a| {
        let o = *acc;
        *acc += a as usize + 1;
        Some(o)
    }).collect();
    let p = (0..exps.len()).filter(|&i| exps[i] > 0).min_by_key(|&i| exps[i]).unwrap();
    let ap = exps[p];
    let mut g = Polynomial::zero();
    for (i, sec) in sections.iter().enumerate() {
        for &(mon, c) in sec.terms() {
            // s^α t^β u_i u_p^k with α + β = a_i + k a_p, split over k + 1 coordinates
            let mut beta = mon.exponent(1);
            let first = beta.min(exps[i]);
            beta -= first;
            let mut e = vec![0u32; ring.nvars()];
            e[offsets[i] + first as usize] += 1;
            for _ in 0..k {
                let l = beta.min(ap);
                beta -= l;
                e[offsets[p] + l as usize] += 1;
            }
            debug_assert_eq!(beta, 0);
            g = g.add(&ring, &Polynomial::monomial(Monomial::from_exponents(&e)?, c));
        }
    }
    let cut = scroll.add_gens(&[g])?;
    saturate_by_variable(&cut, offsets[p])
}

/// The same divisor by elimination: the kernel of `(g_1, ..., g_m)` is
/// parametrized by the Koszul vectors `g_j e_i - g_i e_j`, one auxiliary
/// parameter for each, and the parameters are eliminated from the graph.
pub fn divisor_on_scroll_by_elimination(
    field: PrimeField,
    exps: &[u32],
    k: u32,
    sections: &[Polynomial],
) -> Result<GradedIdeal> {
    check_sections(field, exps, k, sections)?;
    let m = exps.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let top = pairs.iter().map(|&(i, j)| exps[i] + exps[j]).max().unwrap() + k + 1;
    let mut names = vec!["s".to_string(), "t".to_string()];
    let mut weights = vec![1u32, 1];
    for &(i, j) in &pairs {
        names.push(format!("l{i}{j}"));
        weights.push(top - exps[i] - exps[j] - k);
    }
    let params = PolyRing::new(field, names)?.with_weights(weights);
    let lift = [0usize, 1];
    let g: Vec<Polynomial> = sections.iter().map(|p| p.permute(&params, &lift)).collect();
    // u_i = Σ_{j>i} λ_ij g_j - Σ_{j<i} λ_ji g_i... per Koszul vector
    let mut u = vec![Polynomial::zero(); m];
    for (p, &(i, j)) in pairs.iter().enumerate() {
        let lam = params.var(2 + p);
        u[i] = u[i].add(&params, &lam.mul(&params, &g[j]));
        u[j] = u[j].sub(&params, &lam.mul(&params, &g[i]));
    }
    let mut forms = Vec::new();
    for (i, &a) in exps.iter().enumerate() {
        for l in 0..=a {
            let st_mon = Monomial::from_exponents(&[a - l, l])?;
            forms.push(u[i].mul_term(&params, st_mon, 1));
        }
    }
    let img = parametrized_image_ideal(&params, &forms)?;
    Ok(img.ideal)
}

fn invert(field: PrimeField, m: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let n = m.len();
    let mut aug: Vec<Vec<u32>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| (i == j) as u32));
            row
        })
        .collect();
    let piv = rref(field, &mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Linear projection of `V(I)` from the subspace `center`. The forms defining
/// the center become the coordinates of the target space.
pub fn project(ideal: &GradedIdeal, center: &LinearSubspace) -> Result<GradedIdeal> {
    let ring = ideal.ring().standard_copy();
    let n = ring.nvars();
    let field = ring.field();
    if center.ring().nvars() != n {
        return Err(Error::DimensionMismatch { expected: n, got: center.ring().nvars() });
    }
    let meet = ideal.standard_graded()?.add_gens(center.forms())?;
    let h = hilbert_series(&meet)?;
    if h.krull_dim > 0 {
        return Err(Error::CenterMeetsVariety { dimension: h.dimension() });
    }
    let c = center.forms().len();
    let mut rows: Vec<Vec<u32>> = center.forms().iter().map(|f| linear_coeffs(&ring, f)).collect();
    for i in 0..n {
        if rows.len() == n {
            break;
        }
        let mut e = vec![0u32; n];
        e[i] = 1;
        rows.push(e);
        if dense_rank(field, &rows) < rows.len() {
            rows.pop();
        }
    }
    let inv = invert(field, &rows).expect("completed basis is invertible");
    // new variables: target coordinates x0..x{c-1}, then the complement
    let mut names: Vec<String> = (0..c).map(|i| format!("x{i}")).collect();
    names.extend((0..n - c).map(|i| format!("_w{i}")));
    let big = PolyRing::new(field, names)?;
    let images: Vec<Polynomial> = (0..n).map(|i| linear_form(&big, &inv[i])).collect();
    let gens = ideal
        .gens()
        .iter()
        .map(|g| g.substitute(&ring, &big, &images))
        .collect::<Result<Vec<_>>>()?;
    let block: Vec<usize> = (c..n).collect();
    eliminate_polys(&big, &gens, &block)
}

/// Saturated ideal of `V(I) ∩ V(h)`, written in the coordinates other than
/// one variable that `h` involves.
pub fn hyperplane_section(ideal: &GradedIdeal, h: &Polynomial, seed: u64) -> Result<GradedIdeal> {
    let ring = ideal.ring().standard_copy();
    let n = ring.nvars();
    let ideal = ideal.standard_graded()?;
    let h = h.resort(&ring);
    if h.homogeneous_degree(&ring) != Some(1) {
        return Err(Error::Hypothesis("hyperplane must be given by a linear form".into()));
    }
    if ideal.contains(&h) {
        return Err(Error::Degenerate(format!("{} lies in the ideal", ring.fmt_poly(&h))));
    }
    let coeffs = linear_coeffs(&ring, &h);
    let p = (0..n).rev().find(|&i| coeffs[i] != 0).unwrap();
    let field = ring.field();
    let names: Vec<String> = (0..n).filter(|&i| i != p).map(|i| ring.names()[i].clone()).collect();
    let small = PolyRing::new(field, names)?;
    let inv = field.inv(coeffs[p])?;
    let mut images = Vec::with_capacity(n);
    let mut idx = 0;
    for i in 0..n {
        if i == p {
            let mut v = Polynomial::zero();
            for (j, &c) in coeffs.iter().enumerate() {
                if j != p && c != 0 {
                    let k = if j < p { j } else { j - 1 };
                    v = v.add(&small, &small.var(k).scale(&small, field.neg(field.mul(c, inv))));
                }
            }
            images.push(v);
        } else {
            images.push(small.var(idx));
            idx += 1;
        }
    }
    let gens = ideal
        .gens()
        .iter()
        .map(|g| g.substitute(&ring, &small, &images))
        .collect::<Result<Vec<_>>>()?;
    let cut = GradedIdeal::new(small, gens)?;
    let before = hilbert_series(&ideal)?.dimension();
    let after = hilbert_series(&cut)?.dimension();
    if after != before - 1 {
        return Err(Error::Degenerate(format!("section has dimension {after}, expected {}", before - 1)));
    }
    saturate_irrelevant(&cut, seed)
}

/// Class of a line relative to a variety of degree `d` in `P^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineClass {
    /// length `d - r + 3`, not contained
    ProperExtremal,
    /// finite intersection of smaller length
    SubExtremal,
    Contained,
}

impl fmt::Display for LineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LineClass::ProperExtremal => "proper extremal",
            LineClass::SubExtremal => "sub-extremal",
            LineClass::Contained => "contained",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecantRecord {
    pub length: Option<u64>,
    pub class: LineClass,
}

/// Length of `X ∩ L` for a line `L`. Containment is decided first by
/// restricting the Gröbner basis of `I_X` to a parametrization of `L`.
pub fn secant_length(ideal: &GradedIdeal, line: &LinearSubspace, d: i64, r: i64) -> Result<SecantRecord> {
    if line.dim() != 1 {
        return Err(Error::Hypothesis(format!("expected a line, got a subspace of dimension {}", line.dim())));
    }
    let ideal = ideal.standard_graded()?;
    let ring = ideal.ring().clone();
    if line_restrictions(&ideal, line)?.iter().all(|f| f.is_zero()) {
        return Ok(SecantRecord { length: None, class: LineClass::Contained });
    }
    let len = scheme_length(&ideal.add_gens(line.forms())?)?;
    let _ = ring;
    let class = if len as i64 == d - r + 3 { LineClass::ProperExtremal } else { LineClass::SubExtremal };
    Ok(SecantRecord { length: Some(len), class })
}

/// Restrictions of the Gröbner basis of `I` to the line, as binary forms in
/// `K[s, t]`.
pub fn line_restrictions(ideal: &GradedIdeal, line: &LinearSubspace) -> Result<Vec<Polynomial>> {
    let ring = ideal.ring().standard_copy();
    let st = binary_ring(ring.field());
    let pts = line.points();
    let images: Vec<Polynomial> = (0..ring.nvars())
        .map(|i| linear_form(&st, &[pts[0][i], pts[1][i]]))
        .collect();
    ideal.gb().elements().iter().map(|g| g.substitute(&ring, &st, &images)).collect()
}

/// The plane `F(X)` of a surface of maximal sectional regularity, found as
/// `(J : I)` for `J` generated by the elements of `I` of degree at most
/// `d - r + 2`, together with the ideal `I ∩ L` of `X ∪ F(X)`.
pub fn extremal_plane(ideal: &GradedIdeal, d: i64, r: i64) -> Result<(LinearSubspace, GradedIdeal)> {
    let ideal = ideal.standard_graded()?;
    let ring = ideal.ring().clone();
    if ring.nvars() as i64 != r + 1 {
        return Err(Error::DimensionMismatch { expected: (r + 1) as usize, got: ring.nvars() });
    }
    let top = d - r + 2;
    let low: Vec<Polynomial> = ideal.gens().iter().filter(|g| (g.total_degree() as i64) <= top).cloned().collect();
    if low.is_empty() {
        return Err(Error::Hypothesis(format!("no generators of degree <= {top}")));
    }
    let j = GradedIdeal::new(ring.clone(), low)?;
    let q = crate::groebner::colon_ideal(&j, &ideal)?;
    let lin: Vec<Polynomial> = q.gb().elements().iter().filter(|g| g.total_degree() == 1).cloned().collect();
    let plane = LinearSubspace::new(&ring, lin).map_err(|_| Error::Hypothesis("no extremal plane".into()))?;
    if plane.dim() != 2 {
        return Err(Error::Hypothesis(format!("extremal locus candidate has dimension {}", plane.dim())));
    }
    let y = crate::groebner::intersect(&ideal, &plane.ideal())?;
    Ok((plane, y))
}

/// One line examined by a census.
#[derive(Clone, Debug)]
pub struct LineRecord {
    pub points: [Vec<u32>; 2],
    /// a line section of the scroll, as opposed to a random control line
    pub structured: bool,
    pub record: SecantRecord,
}

#[derive(Clone, Debug)]
pub struct SecantCensusReport {
    pub d: i64,
    pub r: i64,
    pub records: Vec<LineRecord>,
    /// proper extremal lines among the scroll's line sections
    pub extremal_count: usize,
    /// projective dimension of the span of the proper extremal lines, `-1`
    /// if there are none
    pub span_dim: i64,
    /// dimension of the family of proper extremal lines, estimated from
    /// the line sections of the scroll
    pub family_dim_estimate: i64,
}

/// Surface `X ∈ |H + kF|` on the threefold scroll `S(1, a, b) ⊂ P^{a+b+3}`.
#[derive(Clone, Debug)]
pub struct ScrollDivisor {
    pub a: u32,
    pub b: u32,
    pub d: u32,
    pub sections: [Polynomial; 3],
}

impl ScrollDivisor {
    pub fn r(&self) -> u32 {
        self.a + self.b + 3
    }

    pub fn class(&self) -> u32 {
        self.d + 2 - self.r()
    }

    pub fn exps(&self) -> [u32; 3] {
        [1, self.a, self.b]
    }

    /// Random sections; `contains_line` forces the line section `S(1)` into
    /// the surface.
    pub fn random(field: PrimeField, a: u32, b: u32, d: u32, contains_line: bool, seed: u64) -> Result<Self> {
        if !(1 <= a && a <= b && d > a + b + 3) {
            return Err(Error::Hypothesis(format!("need 1 <= a <= b and d > r, got a={a} b={b} d={d}")));
        }
        let st = binary_ring(field);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = d + 2 - (a + b + 3);
        let g0 = if contains_line { Polynomial::zero() } else { random_binary_form(&st, 1 + k, &mut rng) };
        let g1 = random_binary_form(&st, a + k, &mut rng);
        let g2 = random_binary_form(&st, b + k, &mut rng);
        Ok(ScrollDivisor { a, b, d, sections: [g0, g1, g2] })
    }

    pub fn ideal(&self, field: PrimeField) -> Result<GradedIdeal> {
        divisor_on_scroll_ideal(field, &self.exps(), self.class(), &self.sections)
    }
}

/// Classify the line sections of `S(1, a, b)` (sampled when they move in a
/// family) and `controls` random lines against `X`.
pub fn extremal_secant_census(
    x: &GradedIdeal,
    recipe: &ScrollDivisor,
    samples: usize,
    controls: usize,
    seed: u64,
) -> Result<SecantCensusReport> {
    let field = x.ring().field();
    let (a, b) = (recipe.a, recipe.b);
    if a < 1 || a > b || recipe.d <= recipe.r() {
        return Err(Error::UnsupportedRecipe("census needs X in |H+kF| on S(1,a,b) with d > r".into()));
    }
    let n = (recipe.r() + 1) as usize;
    if x.ring().nvars() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.ring().nvars() });
    }
    let ring = x.ring().standard_copy();
    let (d, r) = (recipe.d as i64, recipe.r() as i64);
    // first coordinate of each block of S(1, a, b)
    let offsets = [0usize, 2, 2 + a as usize + 1];
    let linear_blocks: Vec<usize> = (0..3).filter(|&i| recipe.exps()[i] == 1).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines: Vec<([Vec<u32>; 2], bool)> = Vec::new();
    let section_line = |c: &[u32]| -> [Vec<u32>; 2] {
        let mut p = vec![0u32; n];
        let mut q = vec![0u32; n];
        for (k, &blk) in linear_blocks.iter().enumerate() {
            p[offsets[blk]] = c[k];
            q[offsets[blk] + 1] = c[k];
        }
        [p, q]
    };
    if linear_blocks.len() == 1 {
        lines.push((section_line(&[1]), true));
    } else {
        for _ in 0..samples {
            let c: Vec<u32> = (0..linear_blocks.len()).map(|_| rng.gen_range(1..field.characteristic())).collect();
            lines.push((section_line(&c), true));
        }
    }
    for _ in 0..controls {
        loop {
            let p = random_vec(&mut rng, field, n);
            let q = random_vec(&mut rng, field, n);
            if dense_rank(field, &[p.clone(), q.clone()]) == 2 {
                lines.push(([p, q], false));
                break;
            }
        }
    }
    let mut records = Vec::new();
    let mut extremal_points = Vec::new();
    for (pts, structured) in lines {
        let line = LinearSubspace::span(&ring, &pts)?;
        let record = secant_length(x, &line, d, r)?;
        if structured && record.class == LineClass::ProperExtremal {
            extremal_points.extend(pts.iter().cloned());
        }
        records.push(LineRecord { points: pts, structured, record });
    }
    let extremal_count = records.iter().filter(|l| l.structured && l.record.class == LineClass::ProperExtremal).count();
    let span_dim = if extremal_points.is_empty() { -1 } else { dense_rank(field, &extremal_points) as i64 - 1 };
    let family_dim_estimate = if extremal_count == 0 { -1 } else { linear_blocks.len() as i64 - 1 };
    Ok(SecantCensusReport { d, r, records, extremal_count, span_dim, family_dim_estimate })
}

/// Center of a projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Center {
    /// the linear forms cutting out the center
    Forms(Vec<String>),
    /// a general subspace of the given dimension inside the coordinate
    /// subspace spanned by the listed variables
    General { dim: usize, within: Vec<String> },
}

/// Source of the sections of a divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sections {
    Given(Vec<String>),
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietyRecipe {
    Scroll(Vec<u32>),
    Divisor { scroll: Vec<u32>, k: u32, sections: Sections },
    Parametrized { forms: Vec<String> },
    Projection { inner: Box<VarietyRecipe>, center: Center },
}

impl VarietyRecipe {
    /// `(dimension, degree)` when the recipe determines them.
    pub fn expected(&self) -> Option<(i64, i64)> {
        match self {
            VarietyRecipe::Scroll(e) => Some((e.len() as i64, e.iter().sum::<u32>() as i64)),
            VarietyRecipe::Divisor { scroll, k, .. } => {
                Some((scroll.len() as i64 - 1, scroll.iter().sum::<u32>() as i64 + *k as i64))
            }
            VarietyRecipe::Parametrized { .. } => None,
            VarietyRecipe::Projection { inner, .. } => inner.expected(),
        }
    }

    /// Parse the text format, one directive per line, applied top-down:
    ///
    /// ```text
    /// scroll 1 2 3
    /// divisor H+3F section g0=s^4, g1=..., g2=...
    /// param s^3*u, s^2*t*u, ...
    /// project center x0-x3, x1+x2
    /// project general 0 within x0 x1 x2 x3
    /// ```
    pub fn parse(text: &str) -> Result<VarietyRecipe> {
        let mut cur: Option<VarietyRecipe> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let col = raw.len() - raw.trim_start().len() + 1;
            let err = |msg: String| Error::Parse { line: line_no, column: col, message: msg };
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match head {
                "scroll" => {
                    if cur.is_some() {
                        return Err(err("scroll must come first".into()));
                    }
                    let exps = rest
                        .split_whitespace()
                        .map(|w| w.parse::<u32>().map_err(|_| err(format!("bad scroll exponent {w:?}"))))
                        .collect::<Result<Vec<_>>>()?;
                    if exps.is_empty() {
                        return Err(err("scroll needs exponents".into()));
                    }
                    cur = Some(VarietyRecipe::Scroll(exps));
                }
                "param" => {
                    if cur.is_some() {
                        return Err(err("param must come first".into()));
                    }
                    let forms: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
                    if forms.iter().any(|f| f.is_empty()) {
                        return Err(err("empty form".into()));
                    }
                    cur = Some(VarietyRecipe::Parametrized { forms });
                }
                "divisor" => {
                    let Some(VarietyRecipe::Scroll(scroll)) = cur.take() else {
                        return Err(err("divisor must follow a scroll".into()));
                    };
                    let (class, secs) = rest.split_once("section").ok_or_else(|| err("expected 'section'".into()))?;
                    let class = class.trim().replace(' ', "");
                    let k = parse_class(&class).ok_or_else(|| err(format!("unsupported class {class:?}; expected H+kF")))?;
                    let secs = secs.trim();
                    let sections = if secs == "random" {
                        Sections::Random
                    } else {
                        let mut out = Vec::new();
                        for (i, part) in secs.split(',').enumerate() {
                            let part = part.trim();
                            let body = match part.split_once('=') {
                                Some((name, body)) if name.trim() == format!("g{i}") => body.trim(),
                                Some((name, _)) => return Err(err(format!("expected g{i}, got {}", name.trim()))),
                                None => part,
                            };
                            out.push(body.to_string());
                        }
                        if out.len() != scroll.len() {
                            return Err(err(format!("expected {} sections, got {}", scroll.len(), out.len())));
                        }
                        Sections::Given(out)
                    };
                    cur = Some(VarietyRecipe::Divisor { scroll, k, sections });
                }
                "project" => {
                    let Some(inner) = cur.take() else {
                        return Err(err("project needs a variety above it".into()));
                    };
                    let center = if let Some(forms) = rest.strip_prefix("center") {
                        Center::Forms(forms.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
                    } else if let Some(g) = rest.strip_prefix("general") {
                        let (dim, within) = g.split_once("within").ok_or_else(|| err("expected 'within'".into()))?;
                        let dim = dim.trim().parse::<usize>().map_err(|_| err(format!("bad dimension {:?}", dim.trim())))?;
                        let within: Vec<String> = within.split_whitespace().map(|s| s.to_string()).collect();
                        Center::General { dim, within }
                    } else {
                        return Err(err("expected 'center' or 'general'".into()));
                    };
                    cur = Some(VarietyRecipe::Projection { inner: Box::new(inner), center });
                }
                other => return Err(err(format!("unknown directive {other:?}"))),
            }
        }
        cur.ok_or(Error::Parse { line: 1, column: 1, message: "empty recipe".into() })
    }
}

impl fmt::Display for VarietyRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietyRecipe::Scroll(e) => {
                let e: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                writeln!(f, "scroll {}", e.join(" "))
            }
            VarietyRecipe::Divisor { scroll, k, sections } => {
                write!(f, "{}", VarietyRecipe::Scroll(scroll.clone()))?;
                match sections {
                    Sections::Random => writeln!(f, "divisor H+{k}F section random"),
                    Sections::Given(g) => {
                        let g: Vec<String> = g.iter().enumerate().map(|(i, s)| format!("g{i}={s}")).collect();
                        writeln!(f, "divisor H+{k}F section {}", g.join(", "))
                    }
                }
            }
            VarietyRecipe::Parametrized { forms } => writeln!(f, "param {}", forms.join(", ")),
            VarietyRecipe::Projection { inner, center } => {
                write!(f, "{inner}")?;
                match center {
                    Center::Forms(fs) => writeln!(f, "project center {}", fs.join(", ")),
                    Center::General { dim, within } => writeln!(f, "project general {dim} within {}", within.join(" ")),
                }
            }
        }
    }
}

/// Result of compiling a recipe.
#[derive(Clone, Debug)]
pub struct CompiledVariety {
    pub ideal: GradedIdeal,
    pub expected: Option<(i64, i64)>,
    pub degenerate: bool,
    /// seeds consumed by general choices
    pub seeds: Vec<u64>,
}

impl CompiledVariety {
    /// Ambient `r` of `P^r`.
    pub fn r(&self) -> usize {
        self.ideal.ring().nvars() - 1
    }
}

/// Parameter ring for the identifiers occurring in `forms`, in order of
/// first appearance.
fn param_ring(field: PrimeField, forms: &[String]) -> Result<PolyRing> {
    let mut names: Vec<String> = Vec::new();
    for f in forms {
        let mut cur = String::new();
        let flush = |cur: &mut String, names: &mut Vec<String>| {
            if !cur.is_empty() && !names.contains(cur) {
                names.push(cur.clone());
            }
            cur.clear();
        };
        for ch in f.chars() {
            if ch.is_ascii_alphabetic() || ch == '_' || (!cur.is_empty() && ch.is_ascii_digit()) {
                cur.push(ch);
            } else {
                flush(&mut cur, &mut names);
            }
        }
        flush(&mut cur, &mut names);
    }
    PolyRing::new(field, names)
}

fn parse_class(class: &str) -> Option<u32> {
    let rest = class.strip_prefix('H')?;
    if rest.is_empty() {
        return Some(0);
    }
    let k = rest.strip_prefix('+')?.strip_suffix('F')?;
    if k.is_empty() {
        Some(1)
    } else {
        k.parse().ok()
    }
}

/// Compile a recipe to the ideal of the variety it describes.
pub fn compile(recipe: &VarietyRecipe, field: PrimeField, seed: u64) -> Result<CompiledVariety> {
    let expected = recipe.expected();
    match recipe {
        VarietyRecipe::Scroll(e) => {
            Ok(CompiledVariety { ideal: scroll_ideal(field, e)?, expected, degenerate: false, seeds: vec![] })
        }
        VarietyRecipe::Divisor { scroll, k, sections } => {
            let st = binary_ring(field);
            let (gs, seeds) = match sections {
                Sections::Given(g) => (g.iter().map(|s| st.parse(s)).collect::<Result<Vec<_>>>()?, vec![]),
                Sections::Random => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (scroll.iter().map(|a| random_binary_form(&st, a + k, &mut rng)).collect(), vec![seed])
                }
            };
            let ideal = divisor_on_scroll_ideal(field, scroll, *k, &gs)?;
            Ok(CompiledVariety { ideal, expected, degenerate: false, seeds })
        }
        VarietyRecipe::Parametrized { forms } => {
            let params = param_ring(field, forms)?;
            let fs = forms.iter().map(|s| params.parse(s)).collect::<Result<Vec<_>>>()?;
            let img = parametrized_image_ideal(&params, &fs)?;
            Ok(CompiledVariety { ideal: img.ideal, expected, degenerate: img.degenerate, seeds: vec![] })
        }
        VarietyRecipe::Projection { inner, center } => {
            let base = compile(inner, field, seed)?;
            let ring = base.ideal.ring().standard_copy();
            let mut seeds = base.seeds.clone();
            let attempt = |center: &LinearSubspace| -> Result<GradedIdeal> {
                // scrolls project through their parametrization
                if let VarietyRecipe::Scroll(e) = inner.as_ref() {
                    let meet = base.ideal.add_gens(center.forms())?;
                    let h = hilbert_series(&meet)?;
                    if h.krull_dim > 0 {
                        return Err(Error::CenterMeetsVariety { dimension: h.dimension() });
                    }
                    let (params, coords) = scroll_parametrization(field, e)?;
                    let forms: Vec<Polynomial> =
                        center.forms().iter().map(|l| l.substitute(&ring, &params, &coords)).collect::<Result<_>>()?;
                    return Ok(parametrized_image_ideal(&params, &forms)?.ideal);
                }
                project(&base.ideal, center)
            };
            let ideal = match center {
                Center::Forms(fs) => {
                    let forms = fs.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
                    attempt(&LinearSubspace::new(&ring, forms)?)?
                }
                Center::General { dim, within } => {
                    let idx = within
                        .iter()
                        .map(|v| ring.var_index(v).ok_or_else(|| Error::UnsupportedRecipe(format!("unknown variable {v}"))))
                        .collect::<Result<Vec<_>>>()?;
                    if dim + 1 > idx.len() {
                        return Err(Error::Hypothesis("center larger than its ambient subspace".into()));
                    }
                    let mut found = None;
                    for attempt_no in 0..MAX_RETRIES as u64 {
                        let s = seed.wrapping_add(attempt_no);
                        let mut rng = ChaCha8Rng::seed_from_u64(s);
                        let pts: Vec<Vec<u32>> = (0..=*dim)
                            .map(|_| {
                                let mut p = vec![0u32; ring.nvars()];
                                for &i in &idx {
                                    p[i] = rng.gen_range(0..field.characteristic());
                                }
                                p
                            })
                            .collect();
                        if dense_rank(field, &pts) != dim + 1 {
                            continue;
                        }
                        let center = LinearSubspace::span(&ring, &pts)?;
                        match attempt(&center) {
                            Ok(i) => {
                                seeds.push(s);
                                found = Some(i);
                                break;
                            }
                            Err(Error::CenterMeetsVariety { .. }) => continue,
                            Err(e) => return Err(e),
                        }
                    }
                    found.ok_or(Error::GenericityExhausted(MAX_RETRIES))?
                }
            };
            let degenerate = ideal.initial_degree() == Some(1);
            Ok(CompiledVariety { ideal, expected, degenerate, seeds })
        }
    }
}

/// The surface `X_f ⊂ P^{a+3}` parametrized by
/// `(u s^a : u s^{a-1} t : ... : u t^a : v s^b : v f : v t^b)`.
pub fn xf_recipe(a: u32, b: u32, f: &str) -> VarietyRecipe {
    let mut forms: Vec<String> = (0..=a).map(|j| format!("u*s^{}*t^{}", a - j, j)).collect();
    forms.push(format!("v*s^{b}"));
    forms.push(format!("v*({f})"));
    forms.push(format!("v*t^{b}"));
    VarietyRecipe::Parametrized { forms }
}

/// `S(a, b)` projected from a general `(a-3)`-dimensional subspace of the
/// span of its curve `S(a)`, landing in `P^{b+3}`.
pub fn projected_scroll_recipe(a: u32, b: u32) -> VarietyRecipe {
    VarietyRecipe::Projection {
        inner: Box::new(VarietyRecipe::Scroll(vec![a, b])),
        center: Center::General { dim: a as usize - 3, within: (0..=a).map(|i| format!("x{i}")).collect() },
    }
}

/// Binary forms `Σ_{j=lo}^{hi} s^(deg-j) t^j`.
fn form_sum(deg: u32, lo: u32, hi: u32) -> String {
    (lo..=hi)
        .map(|j| match (deg - j, j) {
            (0, j) => format!("t^{j}"),
            (i, 0) => format!("s^{i}"),
            (1, 1) => "s*t".to_string(),
            (1, j) => format!("s*t^{j}"),
            (i, 1) => format!("s^{i}*t"),
            (i, j) => format!("s^{i}*t^{j}"),
        })
        .collect::<Vec<_>>()
        .join("+")
}

/// Names accepted by [`named_recipe`].
pub const NAMED_EXAMPLES: [&str; 6] =
    ["example-7.3", "example-7.4-f1", "example-7.4-f2", "example-7.4-f3", "example-7.5-f1", "example-7.5-f2"];

/// The worked surfaces `X_f` on `S(1, a, b)`.
pub fn named_recipe(name: &str) -> Option<VarietyRecipe> {
    let (a, b, f) = match name {
        "example-7.3" => (3, 5, form_sum(5, 1, 4)),
        "example-7.4-f1" => (3, 8, form_sum(8, 1, 7)),
        "example-7.4-f2" => (3, 8, form_sum(8, 1, 6)),
        "example-7.4-f3" => (3, 8, form_sum(8, 1, 4)),
        "example-7.5-f1" => (3, 9, form_sum(9, 1, 8)),
        "example-7.5-f2" => (3, 9, form_sum(9, 1, 7)),
        _ => return None,
    };
    Some(xf_recipe(a, b, &f))
}

/// A seeded general linear form in `n` variables.
pub fn general_linear_form(ring: &PolyRing, seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = ring.field();
    let c: Vec<u32> = (0..ring.nvars()).map(|_| rng.gen_range(1..f.characteristic())).collect();
    linear_form(&ring.standard_copy(), &c)
}

/// A seeded line inside the span of `points`.
pub fn general_line_in(ring: &PolyRing, points: &[Vec<u32>], seed: u64) -> Result<LinearSubspace> {
    let field = ring.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let combo = |rng: &mut ChaCha8Rng| {
            let mut p = vec![0u32; ring.nvars()];
            for q in points {
                let c = rng.gen_range(0..field.characteristic());
                for (x, &y) in p.iter_mut().zip(q) {
                    *x = field.mul_add(*x, c, y);
                }
            }
            p
        };
        let (p, q) = (combo(&mut rng), combo(&mut rng));
        if dense_rank(field, &[p.clone(), q.clone()]) == 2 {
            return LinearSubspace::span(ring, &[p, q]);
        }
    }
    Err(Error::GenericityExhausted(MAX_RETRIES))
}

/// A seeded plane through nothing in particular.
pub fn general_plane(ring: &PolyRing, seed: u64) -> Result<LinearSubspace> {
    let field = ring.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec<u32>> = (0..3).map(|_| random_vec(&mut rng, field, ring.nvars())).collect();
    LinearSubspace::span(ring, &pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::{betti_table, minimal_free_resolution, reg_depth_from_betti};

    fn field() -> PrimeField {
        PrimeField::default()
    }

    fn ring(n: usize) -> PolyRing {
        PolyRing::standard(field(), n).unwrap()
    }

    fn gens_text(i: &GradedIdeal) -> Vec<String> {
        i.gb().elements().iter().map(|g| i.ring().fmt_poly(g)).collect()
    }

    #[test]
    fn scroll_minors() {
        let q = scroll_ideal(field(), &[1, 1]).unwrap();
        let expect = GradedIdeal::parse(ring(4), &["x0*x3 - x1*x2"]).unwrap();
        assert!(q.same_ideal(&expect));
        let c = scroll_ideal(field(), &[3]).unwrap();
        let cubic = GradedIdeal::parse(ring(4), &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]).unwrap();
        assert!(c.same_ideal(&cubic));
        let s111 = scroll_ideal(field(), &[1, 1, 1]).unwrap();
        assert_eq!(s111.gens().len(), 3);
        let h = hilbert_series(&s111).unwrap();
        assert_eq!((h.dimension(), h.degree()), (3, 3));
        assert!(matches!(scroll_ideal(field(), &[0, 0]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn parametrized_images() {
        let params = PolyRing::new(field(), vec!["u".into(), "v".into(), "s".into(), "t".into()]).unwrap();
        let forms: Vec<Polynomial> = ["u*s", "u*t", "v*s", "v*t"].iter().map(|f| params.parse(f).unwrap()).collect();
        let img = parametrized_image_ideal(&params, &forms).unwrap();
        assert!(img.ideal.same_ideal(&GradedIdeal::parse(ring(4), &["x0*x3 - x1*x2"]).unwrap()));
        assert!(!img.degenerate);
        // twisted cubic, checked by substituting the parametrization back
        let st = binary_ring(field());
        let forms: Vec<Polynomial> = ["s^3", "s^2*t", "s*t^2", "t^3"].iter().map(|f| st.parse(f).unwrap()).collect();
        let img = parametrized_image_ideal(&st, &forms).unwrap();
        assert_eq!(gens_text(&img.ideal).len(), 3);
        for g in img.ideal.gens() {
            assert!(g.substitute(img.ideal.ring(), &st, &forms).unwrap().is_zero());
        }
        // forms in a hyperplane
        let forms: Vec<Polynomial> = ["s^2", "s*t", "t^2", "s^2 + t^2"].iter().map(|f| st.parse(f).unwrap()).collect();
        assert!(parametrized_image_ideal(&st, &forms).unwrap().degenerate);
    }

    #[test]
    fn weight_inference() {
        let params = PolyRing::new(field(), vec!["s".into(), "t".into(), "u".into(), "v".into()]).unwrap();
        let forms: Vec<Polynomial> =
            ["u*s^3", "u*t^3", "v*s^5", "v*t^5"].iter().map(|f| params.parse(f).unwrap()).collect();
        let w = infer_weights(&params, &forms).unwrap();
        assert_eq!(w, vec![1, 1, 3, 1]);
        let forms: Vec<Polynomial> = ["1", "s", "s^2"].iter().map(|f| params.parse(f).unwrap()).collect();
        assert_eq!(infer_weights(&params, &forms), None);
        // the scaling fallback still yields the cone over the image
        let img = parametrized_image_ideal(&params, &forms).unwrap();
        assert!(img.ideal.same_ideal(&GradedIdeal::parse(ring(3), &["x1^2 - x0*x2"]).unwrap()));
    }

    #[test]
    fn binary_gcd() {
        let st = binary_ring(field());
        let p = |s: &str| st.parse(s).unwrap();
        assert_eq!(binary_gcd_degree(&st, &[p("s^2 - t^2"), p("s*t - t^2")]), Some(1));
        assert_eq!(binary_gcd_degree(&st, &[p("s^3"), p("s^2*t")]), Some(2));
        assert_eq!(binary_gcd_degree(&st, &[p("s"), p("t")]), Some(0));
        assert_eq!(binary_gcd_degree(&st, &[Polynomial::zero()]), None);
    }

    #[test]
    fn divisor_degrees() {
        // k = 0 on S(1,2): a hyperplane section, the twisted cubic
        let st = binary_ring(field());
        let c = divisor_on_scroll_ideal(field(), &[1, 2], 0, &[st.parse("s").unwrap(), st.parse("s^2+t^2").unwrap()])
            .unwrap();
        let h = hilbert_series(&c).unwrap();
        assert_eq!((h.dimension(), h.degree()), (1, 3));
        // C in |H + 3F| on S(1,2): degree 6, meeting S(1) in 4 points
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let gs = vec![random_binary_form(&st, 4, &mut rng), random_binary_form(&st, 5, &mut rng)];
        let c = divisor_on_scroll_ideal(field(), &[1, 2], 3, &gs).unwrap();
        assert!(c.same_ideal(&divisor_on_scroll_by_elimination(field(), &[1, 2], 3, &gs).unwrap()));
        let h = hilbert_series(&c).unwrap();
        assert_eq!((h.dimension(), h.degree()), (1, 6));
        let line = LinearSubspace::span(&ring(5), &[vec![1, 0, 0, 0, 0], vec![0, 1, 0, 0, 0]]).unwrap();
        let rec = secant_length(&c, &line, 6, 4).unwrap();
        assert_eq!(rec.length, Some(4));
        // a surface on S(1,1,1), both routes
        let gs: Vec<Polynomial> = (0..3).map(|_| random_binary_form(&st, 2, &mut rng)).collect();
        let x = divisor_on_scroll_ideal(field(), &[1, 1, 1], 1, &gs).unwrap();
        assert!(x.same_ideal(&divisor_on_scroll_by_elimination(field(), &[1, 1, 1], 1, &gs).unwrap()));
        let h = hilbert_series(&x).unwrap();
        assert_eq!((h.dimension(), h.degree()), (2, 4));
        // common root of the sections
        let bad = [st.parse("s").unwrap(), st.parse("2*s").unwrap()];
        assert!(matches!(divisor_on_scroll_ideal(field(), &[1, 1], 0, &bad), Err(Error::NonReducedRecipe(_))));
    }

    #[test]
    fn projection_of_the_twisted_cubic() {
        // from (0:0:0:1)... a point off the curve: a plane cubic
        let c = scroll_ideal(field(), &[3]).unwrap();
        let r = ring(4);
        let center = LinearSubspace::span(&r, &[vec![0, 1, 0, 0]]).unwrap();
        let img = project(&c, &center).unwrap();
        assert_eq!(img.ring().nvars(), 3);
        assert_eq!(img.gens().len(), 1);
        assert_eq!(img.gens()[0].total_degree(), 3);
        let on = LinearSubspace::span(&r, &[vec![1, 0, 0, 0]]).unwrap();
        assert!(matches!(project(&c, &on), Err(Error::CenterMeetsVariety { dimension: 0 })));
        // empty center
        let all = LinearSubspace::new(&r, (0..4).map(|i| r.var(i)).collect()).unwrap();
        assert!(project(&c, &all).unwrap().same_ideal(&c));
    }

    #[test]
    fn sections_of_a_scroll() {
        let s12 = scroll_ideal(field(), &[1, 2]).unwrap();
        let h = general_linear_form(s12.ring(), 3);
        let c = hyperplane_section(&s12, &h, 0).unwrap();
        let hs = hilbert_series(&c).unwrap();
        assert_eq!((hs.dimension(), hs.degree()), (1, 3));
        let rd = reg_depth_from_betti(&betti_table(&minimal_free_resolution(&c).unwrap()).unwrap()).unwrap();
        assert_eq!(rd.reg, 2);
        // a reducible example: x0 divides a generator
        let red = GradedIdeal::parse(ring(3), &["x0*x1", "x0*x2"]).unwrap();
        assert!(matches!(hyperplane_section(&red, &ring(3).var(0), 0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn secant_classes() {
        let s = scroll_ideal(field(), &[1, 2]).unwrap();
        let r = ring(5);
        let ruling = LinearSubspace::span(&r, &[vec![1, 1, 0, 0, 0], vec![0, 0, 1, 1, 1]]).unwrap();
        assert_eq!(secant_length(&s, &ruling, 3, 4).unwrap().class, LineClass::Contained);
        // joins a point of S(1) to a point of S(2): a 2-secant, extremal for d - r + 3 = 2
        let chord = LinearSubspace::span(&r, &[vec![1, 0, 0, 0, 0], vec![0, 0, 0, 0, 1]]).unwrap();
        let rec = secant_length(&s, &chord, 3, 4).unwrap();
        assert_eq!(rec, SecantRecord { length: Some(2), class: LineClass::ProperExtremal });
        let fiber = LinearSubspace::span(&r, &[vec![1, 0, 0, 0, 0], vec![0, 0, 1, 0, 0]]).unwrap();
        assert_eq!(secant_length(&s, &fiber, 3, 4).unwrap().class, LineClass::Contained);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let far = LinearSubspace::span(&r, &[random_vec(&mut rng, field(), 5), random_vec(&mut rng, field(), 5)]).unwrap();
        assert_eq!(secant_length(&s, &far, 3, 4).unwrap().length, Some(0));
    }

    #[test]
    fn plane_of_a_projected_scroll() {
        // S(3,5) from a point of the span of S(3): the span maps onto F(X)
        let v = compile(&projected_scroll_recipe(3, 5), field(), 11).unwrap();
        let (plane, y) = extremal_plane(&v.ideal, 8, 8).unwrap();
        assert_eq!(plane.dim(), 2);
        assert!(y.contains_ideal(&v.ideal) || v.ideal.contains_ideal(&y));
        assert!(v.ideal.contains_ideal(&y));
        let h = hilbert_series(&y).unwrap();
        assert_eq!((h.dimension(), h.degree()), (2, 9));
        let scroll = scroll_ideal(field(), &[3]).unwrap();
        assert!(matches!(extremal_plane(&scroll, 3, 3), Err(_)));
    }

    #[test]
    fn named_examples() {
        assert_eq!(named_recipe("example-7.3").unwrap(), xf_recipe(3, 5, "s^4*t+s^3*t^2+s^2*t^3+s*t^4"));
        assert_eq!(named_recipe("example-7.4-f3").unwrap(), xf_recipe(3, 8, "s^7*t+s^6*t^2+s^5*t^3+s^4*t^4"));
        assert!(NAMED_EXAMPLES.iter().all(|n| named_recipe(n).is_some()));
        assert!(named_recipe("example-7.6").is_none());
    }

    #[test]
    fn recipe_text() {
        let text = "# a surface\nscroll 1 1 1\ndivisor H+3F section g0=s^4, g1=t^4, g2=s^2*t^2+s*t^3\n";
        let r = VarietyRecipe::parse(text).unwrap();
        assert_eq!(VarietyRecipe::parse(&r.to_string()).unwrap(), r);
        assert_eq!(r.expected(), Some((2, 6)));
        let p = VarietyRecipe::parse("scroll 3 5\nproject general 0 within x0 x1 x2 x3").unwrap();
        assert_eq!(p, projected_scroll_recipe(3, 5));
        match VarietyRecipe::parse("scroll 1 1\nfrobnicate") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(VarietyRecipe::parse("divisor H+1F section random").is_err());
        assert!(VarietyRecipe::parse("scroll 1 1 1\ndivisor 2H+1F section random").is_err());
    }
}
