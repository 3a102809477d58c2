//! Brute-force search for `x^2 + b^y = c^z` and the end-to-end verification
//! pipeline for one qualifying instance.

use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{as_perfect_square, PrimalityConfig};
use crate::descent::{descent_trace, k_divisibility_conclusion, scan_cases, CaseScanRow, DescentTrace, KConclusion, TraceVerdict};
use crate::oracles::{
    consecutive_square_root, cohn_report, corollary_c_report, lemma_l2_report, OracleReport, OracleWindow,
};
use crate::sieve::{parity_certificate, ParityCertificate};
use crate::triples::{check_hypotheses, scan_instances, HypothesisReport, TeraiInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("b and c must be coprime, gcd = {0}")]
    NotCoprime(BigUint),
    #[error("{name} = {value} must be at least 2")]
    TooSmall { name: &'static str, value: BigUint },
    #[error("bound {0} must be positive")]
    ZeroBound(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionRecord {
    pub x: BigUint,
    pub y: u32,
    pub z: u32,
}

impl SolutionRecord {
    pub fn satisfies(&self, b: &BigUint, c: &BigUint) -> bool {
        &self.x * &self.x + b.pow(self.y) == c.pow(self.z)
    }
}

impl fmt::Display for SolutionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// All `(x, y, z)` with `x >= 1`, `1 <= y <= y_max`, `1 <= z <= z_max` and
/// `x^2 + b^y = c^z`, sorted by `(z, y)`.
pub fn find_solutions(b: &BigUint, c: &BigUint, y_max: u32, z_max: u32) -> Result<Vec<SolutionRecord>, SolverError> {
    let two = BigUint::from(2u32);
    if b < &two {
        return Err(SolverError::TooSmall { name: "b", value: b.clone() });
    }
    if c < &two {
        return Err(SolverError::TooSmall { name: "c", value: c.clone() });
    }
    let g = b.gcd(c);
    if !g.is_one() {
        return Err(SolverError::NotCoprime(g));
    }
    if y_max == 0 {
        return Err(SolverError::ZeroBound("y_max"));
    }
    if z_max == 0 {
        return Err(SolverError::ZeroBound("z_max"));
    }

    let mut b_pows = Vec::with_capacity(y_max as usize);
    let mut acc = BigUint::one();
    for _ in 0..y_max {
        acc *= b;
        b_pows.push(acc.clone());
    }

    let mut out = Vec::new();
    let mut c_pow = BigUint::one();
    for z in 1..=z_max {
        c_pow *= c;
        for (y, b_pow) in (1..).zip(&b_pows) {
            if b_pow >= &c_pow {
                break;
            }
            if let Some(x) = as_perfect_square(&(&c_pow - b_pow)) {
                out.push(SolutionRecord { x, y, z });
            }
        }
    }
    Ok(out)
}

/// Search limits for [`verify_instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub y_max: u32,
    pub z_max: u32,
    pub r_max: u32,
    pub k_max: u32,
    pub cohn_k_max: u32,
    pub cohn_z_max: u64,
    pub corollary_y_max: u64,
    pub corollary_exponents: Vec<u32>,
    pub l2_m_max: u32,
    pub l2_y_max: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            y_max: 40,
            z_max: 40,
            r_max: 15,
            k_max: 15,
            cohn_k_max: 10,
            cohn_z_max: 1000,
            corollary_y_max: 500,
            corollary_exponents: vec![3, 5, 7, 9, 11],
            l2_m_max: 4,
            l2_y_max: 200,
        }
    }
}

impl Bounds {
    /// Whether any limit is smaller than its default.
    pub fn below_defaults(&self) -> bool {
        let d = Bounds::default();
        self.y_max < d.y_max
            || self.z_max < d.z_max
            || self.r_max < d.r_max
            || self.k_max < d.k_max
            || self.cohn_k_max < d.cohn_k_max
            || self.cohn_z_max < d.cohn_z_max
            || self.corollary_y_max < d.corollary_y_max
            || !d.corollary_exponents.iter().all(|q| self.corollary_exponents.contains(q))
            || self.l2_m_max < d.l2_m_max
            || self.l2_y_max < d.l2_y_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    TheoremConsistent,
    Violation,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::TheoremConsistent => "theorem-consistent",
            Verdict::Violation => "VIOLATION",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A failed pipeline step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub step: String,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub instance: TeraiInstance,
    pub hypotheses: HypothesisReport,
    pub parity: ParityCertificate,
    pub case_scan: Vec<CaseScanRow>,
    pub solutions: Vec<SolutionRecord>,
    pub traces: Vec<DescentTrace>,
    pub oracles: Vec<OracleReport>,
    pub bounds: Bounds,
    pub primality: PrimalityConfig,
    pub failures: Vec<Failure>,
    pub verdict: Verdict,
    pub elapsed_ms: u128,
}

impl VerificationReport {
    /// `(r, k)` cells where case B holds.
    pub fn case_b_cells(&self) -> Vec<(u32, u32)> {
        self.case_scan.iter().filter(|r| r.case_b_holds).map(|r| (r.r, r.k)).collect()
    }
}

/// Consecutive-squares window plus the rearranged equation, for one oracle branch.
fn branch_report(inst: &TeraiInstance, r: u32, k: u32) -> Option<OracleReport> {
    let KConclusion::Oracle(branch) = k_divisibility_conclusion(inst, r, k) else {
        return None;
    };
    let mut unexpected = Vec::new();
    if let Some(a) = consecutive_square_root(&branch.base) {
        unexpected.push(vec![branch.base.clone(), a]);
    }
    if branch.equation_holds(inst) {
        unexpected.push(vec![branch.base.clone(), branch.exponent.clone(), BigUint::from(r)]);
    }
    Some(OracleReport {
        window: OracleWindow::Branch { r, k },
        hits: unexpected.clone(),
        unexpected,
    })
}

/// Runs every check for `inst` and folds them into one verdict.
pub fn verify_instance(inst: &TeraiInstance, bounds: &Bounds) -> VerificationReport {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut fail = |step: &str, detail: String| {
        failures.push(Failure {
            step: step.to_string(),
            detail,
        })
    };

    let hypotheses = check_hypotheses(inst);
    if !hypotheses.qualifies {
        fail("hypotheses", format!("failed: {}", hypotheses.failures().join("; ")));
    }

    let parity = parity_certificate(inst);
    if !parity.valid {
        let devs: Vec<String> = parity.deviations.iter().map(ToString::to_string).collect();
        fail("parity", devs.join("; "));
    }

    let case_scan = scan_cases(inst, bounds.r_max, bounds.k_max);
    for row in &case_scan {
        if row.case_a_holds {
            fail("case-scan", format!("case A holds at (r,k) = ({},{})", row.r, row.k));
        }
        if row.case_b_holds && (row.r, row.k) != (1, 1) {
            fail("case-scan", format!("case B holds at (r,k) = ({},{})", row.r, row.k));
        }
    }

    let solutions = match find_solutions(&inst.b, &inst.c, bounds.y_max, bounds.z_max) {
        Ok(s) => s,
        Err(e) => {
            fail("solve", e.to_string());
            Vec::new()
        }
    };
    let mut traces = Vec::new();
    for sol in &solutions {
        if !sol.satisfies(&inst.b, &inst.c) {
            fail("solve", format!("{sol} fails re-substitution"));
        }
        if sol.x != inst.a || sol.y != 2 || sol.z != 2 {
            fail("solve", format!("unexpected solution {sol}"));
        }
        if parity.valid && (sol.y % 2 == 1 || sol.z % 2 == 1) {
            fail("parity", format!("solution {sol} contradicts the certificate"));
        }
        match descent_trace(inst, &sol.x, sol.y as u64, sol.z as u64) {
            Ok(trace) => {
                if let TraceVerdict::Inconsistent { failed } = &trace.verdict {
                    fail("trace", format!("{sol}: {}", failed.join(", ")));
                }
                traces.push(trace);
            }
            Err(e) => fail("trace", format!("{sol}: {e}")),
        }
    }

    let reachable = bounds.y_max >= 2 && bounds.z_max >= 2;
    if reachable && !solutions.iter().any(|s| s.x == inst.a && s.y == 2 && s.z == 2) {
        fail("solve", format!("(2mn, 2, 2) = ({}, 2, 2) not found", inst.a));
    }

    let mut oracles = Vec::new();
    let mut consult = |step: &str, report: Result<OracleReport, crate::oracles::OracleError>| match report {
        Ok(report) => {
            if !report.as_expected() {
                fail(step, format!("unexpected hits in {}", report.window));
            }
            oracles.push(report);
        }
        Err(e) => fail(step, e.to_string()),
    };
    consult("oracle:cohn", cohn_report(bounds.cohn_k_max, bounds.cohn_z_max));
    consult(
        "oracle:corollary-c",
        corollary_c_report(bounds.corollary_y_max, &bounds.corollary_exponents),
    );
    if hypotheses.qualifies {
        if let (Some(p), Some(p_exp)) = (inst.p.to_u64(), inst.p.to_u32()) {
            consult("oracle:lemma-l2", lemma_l2_report(p, p_exp, bounds.l2_m_max, bounds.l2_y_max));
        }
    }
    // cells that reach the b | k branch; unreachable at the default bounds
    for row in case_scan.iter().filter(|r| r.case_b_holds) {
        if let Some(report) = branch_report(inst, row.r, row.k) {
            consult("oracle:branch", Ok(report));
        }
    }

    let verdict = if !failures.is_empty() {
        Verdict::Violation
    } else if bounds.below_defaults() {
        Verdict::Inconclusive
    } else {
        Verdict::TheoremConsistent
    };

    VerificationReport {
        instance: inst.clone(),
        hypotheses,
        parity,
        case_scan,
        solutions,
        traces,
        oracles,
        bounds: bounds.clone(),
        primality: PrimalityConfig::default(),
        failures,
        verdict,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// [`verify_instance`] over every qualifying instance with `m <= m_max`,
/// in `(m, n)` order.
pub fn verify_range(m_max: u64, bounds: &Bounds) -> Vec<VerificationReport> {
    scan_instances(m_max)
        .par_iter()
        .map(|inst| verify_instance(inst, bounds))
        .collect()
}

/// Solutions as `(x, y, z)` with small-integer `x`, for tests and display.
pub fn solution_triples(sols: &[SolutionRecord]) -> Vec<(u64, u32, u32)> {
    sols.iter()
        .map(|s| (s.x.to_u64().unwrap_or(u64::MAX), s.y, s.z))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triples::instance;
    use proptest::prelude::*;

    fn nat(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn solve(b: u64, c: u64, y: u32, z: u32) -> Vec<(u64, u32, u32)> {
        solution_triples(&find_solutions(&nat(b), &nat(c), y, z).unwrap())
    }

    /// Independent double loop: powers by repeated multiplication, square
    /// test through the library's own integer root.
    fn double_loop(b: u64, c: u64, y_max: u32, z_max: u32) -> Vec<(u64, u32, u32)> {
        let mut out = Vec::new();
        for z in 1..=z_max {
            let mut cz = BigUint::one();
            for _ in 0..z {
                cz *= c;
            }
            for y in 1..=y_max {
                let mut by = BigUint::one();
                for _ in 0..y {
                    by *= b;
                }
                if by < cz {
                    let d = &cz - &by;
                    let s = d.sqrt();
                    if &s * &s == d {
                        out.push((s.to_u64().unwrap(), y, z));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn solver_examples() {
        assert_eq!(solve(21, 29, 20, 20), vec![(20, 2, 2)]);
        assert_eq!(solve(35, 37, 20, 20), vec![(12, 2, 2)]);
        assert_eq!(solve(3, 5, 10, 10), vec![(4, 2, 2)]);
    }

    #[test]
    fn solver_rejects_bad_input() {
        assert_eq!(
            find_solutions(&nat(6), &nat(9), 5, 5),
            Err(SolverError::NotCoprime(nat(3)))
        );
        assert!(matches!(find_solutions(&nat(1), &nat(9), 5, 5), Err(SolverError::TooSmall { .. })));
        assert_eq!(find_solutions(&nat(3), &nat(5), 0, 5), Err(SolverError::ZeroBound("y_max")));
    }

    #[test]
    fn solver_is_hypothesis_agnostic() {
        // 7 - 3 = 2^2 and 7^3 - 3^5 = 10^2; (3, 7) is no parametrized triple
        assert_eq!(solve(3, 7, 6, 6), vec![(2, 1, 1), (10, 5, 3)]);
    }

    #[test]
    fn solver_matches_double_loop() {
        for b in 2..=40u64 {
            for c in 2..=40u64 {
                if b.gcd(&c) != 1 {
                    continue;
                }
                assert_eq!(solve(b, c, 8, 8), double_loop(b, c, 8, 8), "b={b} c={c}");
            }
        }
    }

    #[test]
    fn verify_examples() {
        for ((m, n), x) in [((5, 2), 20), ((9, 2), 36), ((10, 3), 60)] {
            let report = verify_instance(&instance(m, n).unwrap(), &Bounds::default());
            assert_eq!(report.verdict, Verdict::TheoremConsistent, "{:?}", report.failures);
            assert_eq!(solution_triples(&report.solutions), vec![(x, 2, 2)]);
        }
    }

    #[test]
    fn verify_non_qualifying_is_violation() {
        let report = verify_instance(&instance(4, 1).unwrap(), &Bounds::default());
        assert_eq!(report.verdict, Verdict::Violation);
        assert!(report.failures.iter().any(|f| f.step == "hypotheses"));
        assert!(report.failures.iter().any(|f| f.step == "parity"));
    }

    #[test]
    fn verify_small_bounds_inconclusive() {
        let bounds = Bounds {
            y_max: 4,
            z_max: 4,
            ..Bounds::default()
        };
        let report = verify_instance(&instance(5, 2).unwrap(), &bounds);
        assert_eq!(report.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn verify_range_examples() {
        let bounds = Bounds::default();
        let reports = verify_range(10, &bounds);
        assert_eq!(reports.len(), 5);
        assert!(reports.iter().all(|r| r.verdict == Verdict::TheoremConsistent));
        assert!(verify_range(4, &bounds).is_empty());
        assert_eq!(verify_range(5, &bounds).len(), 1);
    }

    proptest! {
        #[test]
        fn enlarging_bounds_keeps_solutions(b in 2u64..60, c in 2u64..60, y in 1u32..8, z in 1u32..8) {
            prop_assume!(b.gcd(&c) == 1);
            let small = find_solutions(&nat(b), &nat(c), y, z).unwrap();
            let large = find_solutions(&nat(b), &nat(c), y + 3, z + 3).unwrap();
            prop_assert!(small.iter().all(|s| large.contains(s)));
            prop_assert!(large.iter().all(|s| s.satisfies(&nat(b), &nat(c))));
        }
    }
}
