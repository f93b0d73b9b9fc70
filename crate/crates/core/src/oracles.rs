//! Closed-form values for surfaces of maximal sectional regularity and the
//! divisors on threefold scrolls they are built from. Pure arithmetic; none
//! of this touches the Gröbner or resolution code.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// `C(n, k)`, zero when `n < k`, `n < 0` or `k < 0`.
pub fn binom(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

fn standing(r: i64, d: i64) -> Result<()> {
    if r < 5 || d <= r {
        return Err(Error::Hypothesis(format!("need 5 <= r < d, got r={r} d={d}")));
    }
    Ok(())
}

fn divisor_formula_hyp(a: i64, r: i64, d: i64) -> Result<()> {
    standing(r, d)?;
    if a < 1 || 2 * a > r - 2 {
        return Err(Error::Hypothesis(format!("need 1 <= a <= (r-2)/2, got a={a} r={r}")));
    }
    Ok(())
}

/// `h^1(J_Y(d-r+1))` for `Y ∈ |H + (d-r+2)F|` on `S(1, a, r-a-3)`.
pub fn h1_divisor_formula(a: i64, r: i64, d: i64) -> Result<u64> {
    divisor_formula_hyp(a, r, d)?;
    Ok(if a >= 2 {
        1
    } else if r >= 6 {
        (d - r) as u64
    } else {
        binom(d - 3, 2)
    })
}

/// `β_{1,d-r+2}(Y)` for the same `Y`.
pub fn beta1_divisor_formula(a: i64, r: i64, d: i64) -> Result<u64> {
    divisor_formula_hyp(a, r, d)?;
    Ok(if a >= 2 {
        1
    } else if r >= 6 {
        (d - r + 3) as u64
    } else {
        binom(d - 1, 2)
    })
}

/// Invariants of a surface `X ∈ |H + (d-3)F|` on `S(1,1,1) ⊂ P^5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorS111 {
    /// `β_{1,d-3}`
    pub beta1: u64,
    /// `h^1(J_X(d-4))`
    pub h1: u64,
    /// index of normality
    pub normality: i64,
    pub depth: u32,
    /// `h^2(J_X(n))` vanishes for every `n`
    pub h2_vanishes: bool,
}

pub fn divisor_s111(d: i64) -> Result<DivisorS111> {
    standing(5, d)?;
    Ok(DivisorS111 { beta1: binom(d - 1, 2), h1: binom(d - 3, 2), normality: d - 4, depth: 1, h2_vanishes: true })
}

/// What is known about one Betti number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Entry {
    Exact(i64),
    AtMost(i64),
    /// `u_{i+1} + a_{i+1} - c_{i+1}`, to be evaluated on computed `u`
    Linked { index: usize, offset: i64 },
    /// one of the listed values
    OneOf(Vec<i64>),
    Unknown,
}

impl Entry {
    /// Whether `value` is consistent with this entry, given the computed
    /// linear strand `u` (indexed from 1).
    pub fn admits(&self, value: i64, u: &[i64]) -> bool {
        match self {
            Entry::Exact(x) => value == *x,
            Entry::AtMost(x) => value <= *x,
            Entry::Linked { index, offset } => u.get(*index).map_or(false, |&ui| value == ui + offset),
            Entry::OneOf(xs) => xs.contains(&value),
            Entry::Unknown => true,
        }
    }
}

/// Betti numbers `β_{i,1} = u_i`, `β_{i,2} = v_i` and the trailing block
/// `β_{i,j} = C(r-2, i-1)` in row `j = tail_row`. Vectors are indexed from 1;
/// slot 0 is unused.
#[derive(Clone, Debug, Serialize)]
pub struct BettiShape {
    pub r: i64,
    pub d: i64,
    pub a: Vec<i64>,
    pub c: Vec<i64>,
    pub u: Vec<Entry>,
    pub v: Vec<Entry>,
    pub tail_row: i64,
    pub tail: Vec<u64>,
}

/// Shape of the resolution of a depth-2 surface of maximal sectional
/// regularity with `d <= 2r - 5`.
pub fn betti_bounds_extremal(r: i64, d: i64) -> Result<BettiShape> {
    standing(r, d)?;
    if d > 2 * r - 5 {
        return Err(Error::Hypothesis(format!("need d <= 2r-5, got r={r} d={d}")));
    }
    let b = |n: i64, k: i64| binom(n, k) as i64;
    let n = r as usize;
    let a: Vec<i64> = (0..=r).map(|i| (d - r + 1) * b(r - 1, i) + b(r - 2, i - 1)).collect();
    let c: Vec<i64> = (0..=r).map(|i| (d - 1) * b(r - 2, i) - b(r - 2, i + 1)).collect();
    let mut u = vec![Entry::Unknown; n + 1];
    let mut v = vec![Entry::Unknown; n + 1];
    u[1] = Entry::Exact(b(r, 2) - d - 1);
    for i in 2..=r - 1 {
        u[i as usize] = if i <= 2 * r - d - 3 { Entry::Exact(c[i as usize] - a[i as usize]) } else { Entry::AtMost(c[i as usize]) };
    }
    for i in 1..=r {
        let iu = i as usize;
        v[iu] = if i <= 2 * r - d - 4 || i == r {
            Entry::Exact(0)
        } else if i <= r - 3 {
            Entry::Linked { index: iu + 1, offset: a[iu + 1] - c[iu + 1] }
        } else if i == r - 2 {
            Entry::Exact(d - r)
        } else {
            Entry::Unknown
        };
    }
    let tail = (0..=r).map(|i| if i == 0 { 0 } else { binom(r - 2, i - 1) }).collect();
    Ok(BettiShape { r, d, a, c, u, v, tail_row: d - r + 2, tail })
}

/// Betti numbers of a surface of type 8 (`d = r + 1`, `e(X) = 3`).
pub fn betti_type8(r: i64) -> Result<BettiShape> {
    if r < 5 {
        return Err(Error::Hypothesis(format!("need r >= 5, got r={r}")));
    }
    let b = |n: i64, k: i64| binom(n, k) as i64;
    let n = r as usize;
    let mut u = vec![Entry::Unknown; n + 1];
    let mut v = vec![Entry::Unknown; n + 1];
    u[1] = Entry::Exact(b(r - 1, 2) - 3);
    for i in 2..=r - 4 {
        u[i as usize] = Entry::Exact((r - 1) * b(r - 2, i) - b(r - 2, i + 1) - 3 * b(r - 2, i - 1));
    }
    u[(r - 3) as usize] = Entry::OneOf(vec![0, r - 2]);
    for i in r - 2..=r {
        u[i as usize] = Entry::Exact(0);
    }
    for i in 1..=r {
        let iu = i as usize;
        v[iu] = if i <= r - 5 || i >= r - 1 {
            Entry::Exact(0)
        } else if i == r - 4 {
            Entry::Linked { index: (r - 3) as usize, offset: (r - 1) * b(r - 2, 2) - 3 * b(r - 2, 3) - r + 2 }
        } else if i == r - 3 {
            Entry::Exact(2 * r - 4)
        } else {
            Entry::Exact(3)
        };
    }
    let tail = (0..=r).map(|i| if i == 0 { 0 } else { binom(r - 2, i - 1) }).collect();
    Ok(BettiShape { r, d: r + 1, a: vec![], c: vec![], u, v, tail_row: 3, tail })
}

/// `h^2(J_X(n))` when `S/(I ∩ L)` is Cohen–Macaulay.
pub fn h2_extremal(r: i64, d: i64, n: i64) -> u64 {
    if n <= 0 {
        binom(d - r + 2, 2)
    } else if n <= d - r {
        binom(d - r - n + 2, 2)
    } else {
        0
    }
}

/// Admissible values of `τ(X) = (depth X, depth X ∪ F(X))` for the band of
/// `d`.
pub fn tau_cases(r: i64, d: i64) -> Result<BTreeSet<(u32, u32)>> {
    standing(r, d)?;
    let set: &[(u32, u32)] = if d <= 2 * r - 4 {
        &[(2, 3)]
    } else if d <= 3 * r - 7 {
        &[(1, 1), (2, 2), (2, 3)]
    } else {
        &[(1, 1), (2, 2)]
    };
    Ok(set.iter().copied().collect())
}

/// Computed quantities for the planar-case identities.
#[derive(Clone, Debug, Default)]
pub struct PlanarInput {
    /// `h^2(S/I_X)_n` and `h^2(S/I_Y)_n` over a common window
    pub h2_x: Option<Vec<(i64, u64)>>,
    pub h2_y: Option<Vec<(i64, u64)>>,
    /// `β_{i,d-r+2}` of `X` and of `Y = X ∪ F`, indexed by `i`
    pub row_x: Option<Vec<u64>>,
    pub row_y: Option<Vec<u64>>,
    /// `β_{r,d-r+2}(X)` and the index of normality (`None` for `-∞`)
    pub normality: Option<Option<i64>>,
    /// the largest `n` in the window with `h^1 ≠ 0` is reliable
    pub normality_reliable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

fn check(name: String, lhs: impl ToString, rhs: impl ToString, pass: bool) -> IdentityCheck {
    IdentityCheck { name, lhs: lhs.to_string(), rhs: rhs.to_string(), pass }
}

/// Evaluate the identities tying `X` to `Y = X ∪ F(X)` in the planar case.
pub fn planar_case_identities(r: i64, d: i64, input: &PlanarInput) -> Result<Vec<IdentityCheck>> {
    standing(r, d)?;
    let missing = |what: &str| Error::IncompleteReport(format!("missing {what}"));
    let h2x = input.h2_x.as_ref().ok_or_else(|| missing("h2 of X"))?;
    let h2y = input.h2_y.as_ref().ok_or_else(|| missing("h2 of Y"))?;
    let row_x = input.row_x.as_ref().ok_or_else(|| missing("Betti row of X"))?;
    let row_y = input.row_y.as_ref().ok_or_else(|| missing("Betti row of Y"))?;
    let normality = input.normality.ok_or_else(|| missing("index of normality"))?;
    let at = |v: &[(i64, u64)], n: i64| v.iter().find(|p| p.0 == n).map(|p| p.1);
    let mut out = Vec::new();
    let j = d - r + 2;
    for i in 1..=r {
        let x = *row_x.get(i as usize).unwrap_or(&0);
        let y = *row_y.get(i as usize).unwrap_or(&0);
        let want = binom(r - 2, i - 1);
        out.push(check(format!("beta_{{{i},{j}}}(X) - beta_{{{i},{j}}}(Y)"), x as i64 - y as i64, want, x as i64 - y as i64 == want as i64));
    }
    let top = at(h2x, d - r).ok_or_else(|| missing("h2 of X at d-r"))?;
    out.push(check(format!("h2(S/I_X)_{}", d - r), top, 1, top == 1));
    let above: Vec<(i64, u64)> = h2x.iter().copied().filter(|p| p.0 > d - r).collect();
    out.push(check(
        format!("h2(S/I_X)_n for n > {}", d - r),
        format!("{:?}", above.iter().map(|p| p.1).collect::<Vec<_>>()),
        "all 0",
        above.iter().all(|p| p.1 == 0),
    ));
    for &(n, hx) in h2x.iter().filter(|p| p.0 >= 0) {
        if let Some(hy) = at(h2y, n) {
            let extra = binom(-n + d - r + 2, 2);
            out.push(check(format!("h2_X({n}) = h2_Y({n}) + C({}, 2)", -n + d - r + 2), hx, hy + extra, hx == hy + extra));
        }
    }
    if let (Some(hx0), Some(hy0)) = (at(h2x, -1), at(h2y, 0)) {
        let e = hy0 + binom(d - r + 2, 2);
        out.push(check("e(X) = h2_Y(0) + C(d-r+2, 2)".into(), hx0, e, hx0 == e));
    }
    let last = *row_x.get(r as usize).unwrap_or(&0);
    let small = match normality {
        None => true,
        Some(n) => n <= d - r,
    };
    out.push(check(
        format!("N(X) <= {} iff beta_{{{r},{j}}}(X) = 0", d - r),
        format!("N(X)={} beta={last}", normality.map_or("-inf".to_string(), |n| n.to_string())),
        "equivalence",
        input.normality_reliable && small == (last == 0),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(2, 5), 0);
        assert_eq!(binom(-1, 0), 0);
        assert_eq!(binom(0, 0), 1);
    }

    #[test]
    fn divisor_formula_cases() {
        assert_eq!(h1_divisor_formula(2, 7, 10).unwrap(), 1);
        assert_eq!(h1_divisor_formula(1, 6, 9).unwrap(), 3);
        assert_eq!(h1_divisor_formula(1, 5, 6).unwrap(), 3);
        assert_eq!(beta1_divisor_formula(3, 8, 12).unwrap(), 1);
        assert_eq!(beta1_divisor_formula(1, 6, 9).unwrap(), 6);
        assert_eq!(beta1_divisor_formula(1, 5, 6).unwrap(), 10);
        assert!(matches!(h1_divisor_formula(1, 4, 6), Err(Error::Hypothesis(_))));
        assert!(matches!(h1_divisor_formula(1, 6, 6), Err(Error::Hypothesis(_))));
        assert!(matches!(beta1_divisor_formula(3, 7, 9), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn s111_divisors() {
        let x = divisor_s111(6).unwrap();
        assert_eq!((x.beta1, x.h1, x.normality, x.depth), (10, 3, 2, 1));
        assert_eq!(divisor_s111(8).unwrap().beta1, 21);
        assert!(divisor_s111(5).is_err());
    }

    #[test]
    fn betti_bounds_at_8_9() {
        let s = betti_bounds_extremal(8, 9).unwrap();
        assert_eq!(s.a[1], 15);
        assert_eq!(s.u[1], Entry::Exact(18));
        assert_eq!(s.v[6], Entry::Exact(1));
        // exact range 2..=4, bounds 5..=7
        assert!(matches!(s.u[4], Entry::Exact(_)));
        assert!(matches!(s.u[5], Entry::AtMost(_)));
        assert_eq!(s.tail_row, 3);
        assert_eq!(s.tail[3], 15);
        assert!(matches!(betti_bounds_extremal(8, 12), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn type8_at_8() {
        let s = betti_type8(8).unwrap();
        assert_eq!(s.u[1], Entry::Exact(18));
        assert_eq!(s.v[6], Entry::Exact(3));
        assert_eq!(s.v[5], Entry::Exact(12));
        assert_eq!(s.u[5], Entry::OneOf(vec![0, 6]));
    }

    #[test]
    fn h2_values() {
        assert_eq!(h2_extremal(8, 9, 0), 3);
        assert_eq!(h2_extremal(8, 9, 1), 1);
        assert_eq!(h2_extremal(8, 9, 2), 0);
        assert_eq!(h2_extremal(8, 9, -4), 3);
    }

    #[test]
    fn tau_bands() {
        let s = |v: &[(u32, u32)]| v.iter().copied().collect::<BTreeSet<_>>();
        assert_eq!(tau_cases(6, 8).unwrap(), s(&[(2, 3)]));
        assert_eq!(tau_cases(6, 11).unwrap(), s(&[(1, 1), (2, 2), (2, 3)]));
        assert_eq!(tau_cases(6, 12).unwrap(), s(&[(1, 1), (2, 2)]));
    }

    #[test]
    fn planar_identities_need_input() {
        assert!(matches!(planar_case_identities(6, 8, &PlanarInput::default()), Err(Error::IncompleteReport(_))));
    }

    proptest! {
        #[test]
        fn bands_partition(r in 5i64..30, off in 1i64..80) {
            let d = r + off;
            let hits = [d <= 2 * r - 4, (2 * r - 3..=3 * r - 7).contains(&d), d >= 3 * r - 6];
            prop_assert_eq!(hits.iter().filter(|&&h| h).count(), 1);
            prop_assert!(!tau_cases(r, d).unwrap().is_empty());
        }

        #[test]
        fn pascal(n in 0i64..60, k in 1i64..60) {
            prop_assert_eq!(binom(n + 1, k), binom(n, k) + binom(n, k - 1));
        }

        #[test]
        fn h2_is_nonincreasing(r in 5i64..12, off in 1i64..10, n in -5i64..20) {
            let d = r + off;
            prop_assert!(h2_extremal(r, d, n + 1) <= h2_extremal(r, d, n));
        }
    }
}
