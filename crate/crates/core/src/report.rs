//! Invariant reports for projective schemes given by homogeneous ideals, and
//! the plain-text ideal file format.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::arith::PrimeField;
use crate::error::{Error, Result};
use crate::geometry::extremal_plane;
use crate::groebner::GradedIdeal;
use crate::hilbert::hilbert_series;
use crate::poly::{PolyRing, Polynomial};
use crate::resolution::{
    betti_table, cohomology_from_resolution, minimal_free_resolution, reg_depth_from_betti, BettiTable,
    CohomologyTable, Normality, Stable,
};

pub const CHARACTERISTIC_CAVEAT: &str = "computed over a prime field; tables agreeing over several primes are \
strong evidence for the characteristic-zero values but not a proof";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    pub grid: String,
    /// `(i, j, β_{i,j})` with `β_{i,j} = dim Tor_i(S/I, K)_{i+j}`
    pub triples: Vec<(usize, i64, u64)>,
}

impl From<&BettiTable> for BettiReport {
    fn from(b: &BettiTable) -> Self {
        BettiReport { grid: b.grid(), triples: b.triples() }
    }
}

impl BettiReport {
    pub fn get(&self, i: usize, j: i64) -> u64 {
        self.triples.iter().find(|t| t.0 == i && t.1 == j).map_or(0, |t| t.2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneReport {
    /// linear forms cutting out the plane
    pub forms: Vec<String>,
    pub betti_y: BettiReport,
    pub depth_y: usize,
    pub reg_y: i64,
    pub h2_y: Vec<(i64, u64)>,
    /// `(depth X, depth X ∪ F)`
    pub tau: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

/// Everything [`analyze`] learns about `X = Proj(S/I)`. Fields stay `None`
/// until their stage has run, so a report interrupted by a timeout is still
/// meaningful.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub complete: bool,
    pub characteristic: u32,
    pub variables: Vec<String>,
    pub seeds: Vec<u64>,
    /// ambient dimension
    pub r: usize,
    pub dim: Option<i64>,
    /// degree `d`
    pub degree: Option<i64>,
    pub reg: Option<i64>,
    pub pd: Option<usize>,
    pub depth: Option<usize>,
    pub betti: Option<BettiReport>,
    /// degrees covered by the `h^i` lists
    pub window: (i64, i64),
    /// `h^i(S/I)_n = h^i(J_X(n))` for `i >= 1`, keyed by `i`
    pub cohomology: BTreeMap<usize, Vec<(i64, u64)>>,
    /// regularity implied by the vanishing of the `h^i` in the window
    pub reg_from_cohomology: Option<i64>,
    pub normality: Option<Normality>,
    pub e: Option<Stable>,
    pub plane: Option<PlaneReport>,
    pub checks: Vec<Check>,
    pub caveat: String,
    pub timings: Option<Vec<StageTiming>>,
}

impl InvariantReport {
    fn new(ideal: &GradedIdeal, seeds: &[u64]) -> Self {
        let ring = ideal.ring();
        InvariantReport {
            complete: false,
            characteristic: ring.field().characteristic(),
            variables: ring.names().to_vec(),
            seeds: seeds.to_vec(),
            r: ring.nvars().saturating_sub(1),
            dim: None,
            degree: None,
            reg: None,
            pd: None,
            depth: None,
            betti: None,
            window: (0, -1),
            cohomology: BTreeMap::new(),
            reg_from_cohomology: None,
            normality: None,
            e: None,
            plane: None,
            checks: Vec::new(),
            caveat: CHARACTERISTIC_CAVEAT.to_string(),
            timings: None,
        }
    }

    pub fn h(&self, i: usize, n: i64) -> Option<u64> {
        self.cohomology.get(&i)?.iter().find(|p| p.0 == n).map(|p| p.1)
    }

    pub fn tau(&self) -> Option<(usize, usize)> {
        self.plane.as_ref().map(|p| p.tau)
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Human-readable rendering of the structured report.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |v: Option<i64>| v.map_or("?".to_string(), |v| v.to_string());
        let _ = writeln!(s, "char {}  P^{}  seeds {:?}", self.characteristic, self.r, self.seeds);
        let _ = writeln!(s, "dim {}  degree {}  reg {}", opt(self.dim), opt(self.degree), opt(self.reg));
        let _ = writeln!(
            s,
            "pd {}  depth {}",
            opt(self.pd.map(|v| v as i64)),
            opt(self.depth.map(|v| v as i64))
        );
        if let Some(n) = self.normality {
            let _ = writeln!(s, "N(X) {n}");
        }
        if let Some(e) = self.e {
            let _ = writeln!(s, "e(X) {e}");
        }
        if let Some(b) = &self.betti {
            let _ = writeln!(s, "Betti table:\n{}", b.grid);
        }
        for (i, vals) in &self.cohomology {
            let row: Vec<String> = vals.iter().map(|(n, v)| format!("{n}:{v}")).collect();
            let _ = writeln!(s, "h{i}  {}", row.join(" "));
        }
        if let Some(p) = &self.plane {
            let _ = writeln!(s, "plane {}", p.forms.join(", "));
            let _ = writeln!(s, "Betti table of X ∪ plane:\n{}", p.betti_y.grid);
            let _ = writeln!(s, "tau ({}, {})", p.tau.0, p.tau.1);
        }
        for c in &self.checks {
            let _ = writeln!(s, "[{}] {}: {}", if c.pass { "ok" } else { "FAIL" }, c.name, c.detail);
        }
        if let Some(t) = &self.timings {
            for st in t {
                let _ = writeln!(s, "time {} {:.3}s", st.stage, st.seconds);
            }
        }
        if !self.complete {
            let _ = writeln!(s, "INCOMPLETE");
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    /// requested `h^i` degrees; the upper end is raised to `reg(S/I)` so the
    /// cohomological regularity is always decidable
    pub window: (i64, i64),
    pub with_plane: bool,
    pub record_timings: bool,
    pub seeds: Vec<u64>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { window: (-3, 3), with_plane: false, record_timings: false, seeds: Vec::new() }
    }
}

fn h_list(t: &CohomologyTable, i: usize) -> Vec<(i64, u64)> {
    (t.window.0..=t.window.1).filter_map(|n| t.get(i, n).map(|v| (n, v))).collect()
}

/// `max {n + i + 1 : h^i(S/I)_n ≠ 0}` over the window.
fn reg_from_table(t: &CohomologyTable) -> Option<i64> {
    t.entries.iter().filter(|(_, &v)| v != 0).map(|(&(i, n), _)| n + i as i64 + 1).max()
}

/// Compute the invariants of `Proj(S/I)`. `progress` sees the report after
/// every stage.
pub fn analyze(
    ideal: &GradedIdeal,
    opts: &AnalysisOptions,
    progress: &mut dyn FnMut(&InvariantReport),
) -> Result<InvariantReport> {
    let ideal = ideal.standard_graded()?;
    let mut rep = InvariantReport::new(&ideal, &opts.seeds);
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut stage = |rep: &mut InvariantReport, name: &str, clock: &mut Instant| {
        timings.push(StageTiming { stage: name.to_string(), seconds: clock.elapsed().as_secs_f64() });
        *clock = Instant::now();
        if opts.record_timings {
            rep.timings = Some(timings.clone());
        }
        progress(rep);
    };

    let h = hilbert_series(&ideal)?;
    if h.dimension() < 0 {
        return Err(Error::Degenerate("the ideal defines the empty scheme".into()));
    }
    rep.dim = Some(h.dimension());
    rep.degree = Some(h.degree());
    stage(&mut rep, "hilbert", &mut clock);

    let res = minimal_free_resolution(&ideal)?;
    let betti = betti_table(&res)?;
    let rd = reg_depth_from_betti(&betti)?;
    rep.reg = Some(rd.reg);
    rep.pd = Some(rd.pd);
    rep.depth = Some(rd.depth);
    rep.betti = Some(BettiReport::from(&betti));
    stage(&mut rep, "resolution", &mut clock);

    let dim = h.dimension() as usize;
    let indices: Vec<usize> = (1..=dim + 1).collect();
    let window = (opts.window.0.min(-2), opts.window.1.max(rd.reg_quotient));
    let coh = cohomology_from_resolution(&res, &indices, window.0..=window.1);
    rep.window = window;
    for &i in &indices {
        rep.cohomology.insert(i, h_list(&coh, i));
    }
    rep.reg_from_cohomology = reg_from_table(&coh);
    rep.normality = Some(coh.index_of_normality());
    if dim >= 1 {
        rep.e = Some(coh.stable_h2());
    }
    stage(&mut rep, "cohomology", &mut clock);

    if opts.with_plane {
        if dim != 2 {
            return Err(Error::Hypothesis(format!("the extremal plane is defined for surfaces, got dimension {dim}")));
        }
        let (plane, y) = extremal_plane(&ideal, h.degree(), rep.r as i64)?;
        let res_y = minimal_free_resolution(&y)?;
        let betti_y = betti_table(&res_y)?;
        let rd_y = reg_depth_from_betti(&betti_y)?;
        let coh_y = cohomology_from_resolution(&res_y, &[2], window.0..=window.1);
        let ring = ideal.ring();
        rep.plane = Some(PlaneReport {
            forms: plane.forms().iter().map(|f| ring.fmt_poly(f)).collect(),
            betti_y: BettiReport::from(&betti_y),
            depth_y: rd_y.depth,
            reg_y: rd_y.reg,
            h2_y: h_list(&coh_y, 2),
            tau: (rd.depth, rd_y.depth),
        });
        stage(&mut rep, "plane", &mut clock);
    }

    rep.checks = consistency_checks(&rep);
    rep.complete = true;
    stage(&mut rep, "checks", &mut clock);
    Ok(rep)
}

fn consistency_checks(rep: &InvariantReport) -> Vec<Check> {
    let mut out = Vec::new();
    if let (Some(pd), Some(depth)) = (rep.pd, rep.depth) {
        out.push(Check {
            name: "depth = r + 1 - pd".into(),
            pass: depth + pd == rep.r + 1,
            detail: format!("depth {depth}, r {}, pd {pd}", rep.r),
        });
    }
    if let Some(reg) = rep.reg {
        // a linear space has no nonzero h^i with i >= 1 in the window
        let from_coh = rep.reg_from_cohomology.unwrap_or(1);
        out.push(Check {
            name: "reg from Betti table = reg from cohomology".into(),
            pass: from_coh.max(1) == reg,
            detail: format!("{reg} vs {from_coh}"),
        });
    }
    if let Some(depth) = rep.depth {
        let low: Vec<usize> = (1..depth).filter(|i| rep.cohomology.get(i).is_some_and(|v| v.iter().any(|p| p.1 != 0))).collect();
        out.push(Check {
            name: "h^i = 0 for 0 < i < depth".into(),
            pass: low.is_empty(),
            detail: if low.is_empty() { "ok".into() } else { format!("nonzero h^i for i in {low:?}") },
        });
    }
    out
}

/// Serialize an ideal: optional `#` comment lines, `ring <char> <vars>`, then
/// one generator per line.
pub fn write_ideal_file(ideal: &GradedIdeal, comments: &[String]) -> String {
    let ring = ideal.ring();
    let mut s = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(s, "# {line}");
        }
    }
    let _ = writeln!(s, "ring {} {}", ring.field().characteristic(), ring.names().join(" "));
    for g in ideal.gens() {
        let _ = writeln!(s, "{}", ring.fmt_poly(g));
    }
    s
}

/// Parse the format written by [`write_ideal_file`]. Returns the ideal and the
/// comment lines.
pub fn parse_ideal_file(text: &str) -> Result<(GradedIdeal, Vec<String>)> {
    let mut comments = Vec::new();
    let mut ring: Option<PolyRing> = None;
    let mut gens: Vec<Polynomial> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        if line.is_empty() {
            continue;
        }
        match &ring {
            None => {
                let mut words = line.split_whitespace();
                let perr = |column: usize, message: &str| Error::Parse { line: line_no, column, message: message.into() };
                if words.next() != Some("ring") {
                    return Err(perr(1, "expected header `ring <char> <variables>`"));
                }
                let ch = words.next().ok_or_else(|| perr(6, "missing characteristic"))?;
                let ch: u64 = ch.parse().map_err(|_| perr(6, "characteristic must be an integer"))?;
                let field = PrimeField::new(ch)?;
                let names: Vec<String> = words.map(str::to_string).collect();
                if names.is_empty() {
                    return Err(perr(line.len() + 1, "no variables"));
                }
                ring = Some(PolyRing::new(field, names)?);
            }
            Some(r) => gens.push(r.parse_line(line, line_no)?),
        }
    }
    let ring = ring.ok_or(Error::Parse { line: 1, column: 1, message: "missing ring header".into() })?;
    Ok((GradedIdeal::new(ring, gens)?, comments))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{compile, scroll_ideal, xf_recipe};

    #[test]
    fn scroll_report() {
        let x = scroll_ideal(PrimeField::default(), &[1, 2]).unwrap();
        let mut stages = 0;
        let rep = analyze(&x, &AnalysisOptions::default(), &mut |_| stages += 1).unwrap();
        assert_eq!((rep.dim, rep.degree, rep.reg, rep.depth), (Some(2), Some(3), Some(2), Some(3)));
        assert_eq!(rep.normality, Some(Normality::NegInfinity));
        assert_eq!(rep.e, Some(Stable::Value(0)));
        assert!(rep.all_checks_pass(), "{}", rep.to_text());
        assert!(rep.complete && stages == 4);
        assert!(matches!(
            analyze(&x, &AnalysisOptions { with_plane: true, ..Default::default() }, &mut |_| {}),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn example_with_plane() {
        let v = compile(&xf_recipe(3, 5, "s^4*t+s^3*t^2+s^2*t^3+s*t^4"), PrimeField::default(), 1).unwrap();
        let opts = AnalysisOptions { with_plane: true, ..Default::default() };
        let rep = analyze(&v.ideal, &opts, &mut |_| {}).unwrap();
        assert_eq!((rep.degree, rep.reg, rep.depth, rep.tau()), (Some(8), Some(5), Some(2), Some((2, 3))));
        let b = rep.betti.as_ref().unwrap();
        assert_eq!((b.get(1, 1), b.get(1, 2)), (6, 4));
        assert!(rep.all_checks_pass(), "{}", rep.to_text());
        let again = analyze(&v.ideal, &opts, &mut |_| {}).unwrap();
        assert_eq!(serde_json::to_string(&rep).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn ideal_files() {
        let x = scroll_ideal(PrimeField::new(101).unwrap(), &[1, 1]).unwrap();
        let text = write_ideal_file(&x, &["scroll 1 1".into()]);
        assert!(text.starts_with("# scroll 1 1\nring 101 "));
        let (y, comments) = parse_ideal_file(&text).unwrap();
        assert!(y.same_ideal(&x));
        assert_eq!(comments, vec!["scroll 1 1"]);
        match parse_ideal_file("ring 7 x y\nx*y +\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_ideal_file("x^2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_ideal_file("ring 8 x\n"), Err(Error::NotPrime(8))));
    }
}
