use std::io::Write;

use rayon::prelude::*;

use super::family::compute_admissible_family;
use super::search::{stepwise_search_with, Outcome, SearchOptions, SearchReport};
use crate::algebra::{max_det_exhaustive, TargetPolynomial};
use crate::enumeration::{enumerate_supports, Enumeration, EnumerationParams};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ProofReport {
    pub target: TargetPolynomial,
    pub n: usize,
    /// Largest determinant of an `(n-1) x (n-1)` 0/1 matrix.
    pub smaller_max_det: i64,
    pub enumeration: Enumeration,
    pub reports: Vec<SearchReport>,
}

impl ProofReport {
    pub fn all_refuted(&self) -> bool {
        self.reports.iter().all(|r| r.outcome.is_refuted())
    }

    /// `n + 1` when every `n x n` candidate is refuted.
    pub fn bound(&self) -> Option<usize> {
        let weight_one_excluded = self.smaller_max_det < self.target.all_ones_value() as i64;
        (weight_one_excluded && self.all_refuted()).then_some(self.n + 1)
    }

    pub fn realized(&self) -> impl Iterator<Item = &SearchReport> {
        self.reports.iter().filter(|r| !r.outcome.is_refuted())
    }
}

/// Enumerates the `n x n` candidate supports for `t` and runs the stepwise
/// search on each, in parallel on the current thread pool.
///
/// A row or column with a single one would make `det(B)` a determinant of
/// size `n - 1`, at most `smaller_max_det`; the enumeration only drops such
/// matrices when this is below `t(1, ..., 1)`.
pub fn prove_lower_bound(t: &TargetPolynomial, n: usize, seed: u64) -> Result<ProofReport> {
    let opts = SearchOptions {
        seed,
        ..SearchOptions::default()
    };
    prove_lower_bound_with(t, n, &opts)
}

pub fn prove_lower_bound_with(t: &TargetPolynomial, n: usize, opts: &SearchOptions) -> Result<ProofReport> {
    if !(2..=6).contains(&n) {
        return Err(Error::SizeLimit(format!("lower-bound runs support 2 <= n <= 6, got {n}")));
    }
    let value = t.all_ones_value() as i64;
    let smaller_max_det = max_det_exhaustive(n - 1)?;
    let params = EnumerationParams {
        abs_det: Some(value),
        ..EnumerationParams::candidates(n)
    };
    let enumeration = enumerate_supports(params)?;
    let reports = enumeration
        .classes
        .par_iter()
        .map(|c| {
            let b = &c.representative;
            let family = compute_admissible_family(b, t)?;
            Ok(stepwise_search_with(b, &family, t, opts)?.0)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProofReport {
        target: *t,
        n,
        smaller_max_det,
        enumeration,
        reports,
    })
}

/// One line per candidate, then a summary line.
pub fn write_proof_report(p: &ProofReport, out: &mut impl Write) -> Result<()> {
    for r in &p.reports {
        let outcome = match r.outcome {
            Outcome::Refuted => "refuted",
            Outcome::Realized(_) => "realized",
        };
        writeln!(
            out,
            "{} {} {} {} {} {}",
            r.support.bitstring(),
            outcome,
            r.stats.support_size,
            r.stats.family_size,
            r.stats.nodes,
            r.stats.max_depth
        )?;
    }
    let refuted = p.reports.iter().filter(|r| r.outcome.is_refuted()).count();
    let nodes: u64 = p.reports.iter().map(|r| r.stats.nodes).sum();
    let result = match p.bound() {
        Some(b) => format!("bdc({}) >= {b}", p.target),
        None => "no bound".to_string(),
    };
    writeln!(
        out,
        "# target={} n={} max_det({})={} candidates={} refuted={} realized={} nodes={} result: {}",
        p.target,
        p.n,
        p.n - 1,
        p.smaller_max_det,
        p.reports.len(),
        refuted,
        p.reports.len() - refuted,
        nodes,
        result
    )?;
    Ok(())
}
