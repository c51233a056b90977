use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::family::AdmissibleFamily;
use crate::algebra::{det_symbolic, FieldElement, PrimeField, TargetPolynomial};
use crate::error::{Error, Result};
use crate::matrix::{place_variables_as, CandidateAssignment, PositionSet, SupportMatrix, VarMatrix, VarNaming};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Refuted,
    /// A matrix with this support whose determinant is exactly the target.
    Realized(VarMatrix),
}

impl Outcome {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Outcome::Refuted)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Number of ones in the support.
    pub support_size: usize,
    pub family_size: usize,
    /// Placements tried.
    pub nodes: u64,
    /// Largest `k` whose partial check passed.
    pub max_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub support: SupportMatrix,
    pub outcome: Outcome,
    pub stats: SearchStats,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub seed: u64,
    pub field: PrimeField,
    /// Random points per partial check.
    pub points: usize,
    /// Keep up to this many rejected placements (for auditing).
    pub record_pruned: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            field: PrimeField::mersenne61(),
            points: 2,
            record_pruned: 0,
        }
    }
}

/// Depth-first search for pairwise disjoint `I_1, ..., I_d` from the family,
/// `d` the number of variables of the target. After placing `x_1..x_k` the
/// determinant must equal the target with the remaining variables set to 1;
/// this is tested at random points over `F_p` with coordinates outside
/// `{0, 1}`. A full placement is accepted only after an exact symbolic check.
///
/// Rejections are never wrong: equal polynomials agree at every point.
pub fn stepwise_search(
    b: &SupportMatrix,
    family: &AdmissibleFamily,
    t: &TargetPolynomial,
    seed: u64,
) -> Result<SearchReport> {
    let opts = SearchOptions {
        seed,
        ..SearchOptions::default()
    };
    Ok(stepwise_search_with(b, family, t, &opts)?.0)
}

/// As [`stepwise_search`], also returning up to `record_pruned` rejected
/// partial placements (the last set is the one that failed).
pub fn stepwise_search_with(
    b: &SupportMatrix,
    family: &AdmissibleFamily,
    t: &TargetPolynomial,
    opts: &SearchOptions,
) -> Result<(SearchReport, Vec<CandidateAssignment>)> {
    if family.support != *b || family.target != *t {
        return Err(Error::InvalidArgument(
            "admissible family was computed for a different support or target".into(),
        ));
    }
    let n = b.n();
    if n > 8 {
        return Err(Error::SizeLimit(format!("search supports n <= 8, got {n}")));
    }
    if opts.points == 0 {
        return Err(Error::InvalidArgument("at least one evaluation point is needed".into()));
    }
    let field = &opts.field;
    let vars = t.effective_variables();
    let d = vars.len();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(b.key());
    let points: Vec<Vec<FieldElement>> = (0..opts.points)
        .map(|_| {
            (0..t.arity())
                .map(|_| field.elem(rng.gen_range(2..field.modulus())))
                .collect()
        })
        .collect();
    // expected[j][k]: target at point j with only the first k variables kept.
    let expected: Vec<Vec<FieldElement>> = points
        .iter()
        .map(|pt| {
            (0..=d)
                .map(|k| {
                    let mut q = vec![FieldElement::ONE; t.arity()];
                    for &v in &vars[..k] {
                        q[v - 1] = pt[v - 1];
                    }
                    t.eval_mod(field, &q)
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;

    let masks = family.masks();
    let mut s = Search {
        n,
        field,
        base: b.row_bits().to_vec(),
        masks: &masks,
        vars: &vars,
        points: &points,
        expected: &expected,
        chosen: Vec::with_capacity(d),
        stats: SearchStats {
            support_size: b.count_ones(),
            family_size: family.len(),
            nodes: 0,
            max_depth: 0,
        },
        pruned: Vec::new(),
        record_pruned: opts.record_pruned,
        realized: None,
        b,
        family,
        t,
    };
    if !masks.is_empty() {
        s.descend(0)?;
    }
    let pruned = s
        .pruned
        .iter()
        .map(|idx| CandidateAssignment::new(idx.iter().map(|&i| family.sets[i].clone()).collect()))
        .collect::<Result<_>>()?;
    let outcome = match s.realized {
        Some(a) => Outcome::Realized(a),
        None => Outcome::Refuted,
    };
    Ok((
        SearchReport {
            support: b.clone(),
            outcome,
            stats: s.stats,
        },
        pruned,
    ))
}

/// The matrix obtained by putting the `k`-th target variable on `sets[k]`.
pub(crate) fn realize(b: &SupportMatrix, t: &TargetPolynomial, sets: Vec<PositionSet>) -> Result<VarMatrix> {
    let vars: Vec<u32> = t.effective_variables()[..sets.len()].iter().map(|&v| v as u32).collect();
    let asgn = CandidateAssignment::new(sets)?;
    place_variables_as(b, &asgn, VarNaming::Grid(t.order() as u32), t.arity() as u32, &vars)
}

struct Search<'a> {
    n: usize,
    field: &'a PrimeField,
    base: Vec<u32>,
    masks: &'a [u64],
    vars: &'a [usize],
    points: &'a [Vec<FieldElement>],
    expected: &'a [Vec<FieldElement>],
    chosen: Vec<usize>,
    stats: SearchStats,
    pruned: Vec<Vec<usize>>,
    record_pruned: usize,
    realized: Option<VarMatrix>,
    b: &'a SupportMatrix,
    family: &'a AdmissibleFamily,
    t: &'a TargetPolynomial,
}

impl Search<'_> {
    fn descend(&mut self, used: u64) -> Result<()> {
        let k = self.chosen.len();
        for i in 0..self.masks.len() {
            if self.masks[i] & used != 0 {
                continue;
            }
            self.stats.nodes += 1;
            self.chosen.push(i);
            if self.partial_ok() {
                self.stats.max_depth = self.stats.max_depth.max(k + 1);
                if k + 1 == self.vars.len() {
                    if self.exact_ok()? {
                        return Ok(());
                    }
                } else {
                    self.descend(used | self.masks[i])?;
                    if self.realized.is_some() {
                        return Ok(());
                    }
                }
            } else if self.pruned.len() < self.record_pruned {
                self.pruned.push(self.chosen.clone());
            }
            self.chosen.pop();
        }
        Ok(())
    }

    fn partial_ok(&self) -> bool {
        let k = self.chosen.len();
        self.points
            .iter()
            .zip(self.expected)
            .all(|(pt, exp)| self.det_times_scale_matches(pt, exp[k]))
    }

    /// Division-free elimination: every row update multiplies the determinant
    /// by the pivot, so compare `det * scale` with `want * scale`.
    fn det_times_scale_matches(&self, pt: &[FieldElement], want: FieldElement) -> bool {
        let (n, f) = (self.n, self.field);
        let mut m = [[FieldElement::ZERO; 8]; 8];
        for (r, row) in m.iter_mut().enumerate().take(n) {
            for (c, slot) in row.iter_mut().enumerate().take(n) {
                if self.base[r] >> (n - 1 - c) & 1 == 1 {
                    *slot = FieldElement::ONE;
                }
            }
        }
        for (j, &i) in self.chosen.iter().enumerate() {
            let value = pt[self.vars[j] - 1];
            let mut mask = self.masks[i];
            while mask != 0 {
                let p = mask.trailing_zeros() as usize;
                m[p / n][p % n] = value;
                mask &= mask - 1;
            }
        }
        let mut det = FieldElement::ONE;
        let mut scale = FieldElement::ONE;
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
                return want.is_zero();
            };
            if p != k {
                m.swap(p, k);
                det = f.neg(det);
            }
            let pivot = m[k][k];
            det = f.mul(det, pivot);
            for r in k + 1..n {
                let lead = m[r][k];
                if lead.is_zero() {
                    continue;
                }
                scale = f.mul(scale, pivot);
                for c in k + 1..n {
                    m[r][c] = f.sub(f.mul(m[r][c], pivot), f.mul(lead, m[k][c]));
                }
            }
        }
        det == f.mul(want, scale)
    }

    fn exact_ok(&mut self) -> Result<bool> {
        let sets = self.chosen.iter().map(|&i| self.family.sets[i].clone()).collect();
        let a = realize(self.b, self.t, sets)?;
        if det_symbolic(&a)? == self.t.to_multipoly() {
            self.realized = Some(a);
            return Ok(true);
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::det_symbolic;
    use crate::constructions::per2_3x3;
    use crate::reconstruction::compute_admissible_family;

    #[test]
    fn per2_toy_is_realized() {
        let t = TargetPolynomial::permanent(2);
        let b = per2_3x3().support().unwrap();
        let fam = compute_admissible_family(&b, &t).unwrap();
        for seed in 0..5 {
            let r = stepwise_search(&b, &fam, &t, seed).unwrap();
            let Outcome::Realized(a) = &r.outcome else {
                panic!("per_2 has a 3x3 realization");
            };
            assert_eq!(det_symbolic(a).unwrap(), t.to_multipoly());
            assert_eq!(a.support().unwrap(), b);
            assert_eq!(r.stats.max_depth, 4);
            assert!(r.stats.nodes >= r.stats.max_depth as u64);
        }
    }

    #[test]
    fn mismatched_family_is_rejected() {
        let t = TargetPolynomial::permanent(2);
        let b = per2_3x3().support().unwrap();
        let fam = compute_admissible_family(&b, &t).unwrap();
        let other = SupportMatrix::from_row_bits(3, vec![7, 5, 6]).unwrap();
        assert!(stepwise_search(&other, &fam, &t, 0).is_err());
        assert!(stepwise_search(&b, &fam, &TargetPolynomial::permanent(3), 0).is_err());
    }

    #[test]
    fn empty_family_refutes_at_depth_zero() {
        let t = TargetPolynomial::permanent(2);
        let b = SupportMatrix::from_row_bits(3, vec![4, 2, 1]).unwrap();
        let fam = compute_admissible_family(&b, &t).unwrap();
        assert!(fam.is_empty());
        let r = stepwise_search(&b, &fam, &t, 0).unwrap();
        assert_eq!(r.outcome, Outcome::Refuted);
        assert_eq!((r.stats.nodes, r.stats.max_depth), (0, 0));
    }
}
