use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{det_int, det_mod_p, interpolate, FieldElement, PrimeField, SquareMatrix, TargetPolynomial, UniPoly};
use crate::error::{Error, Result};
use crate::matrix::{Position, PositionSet, SupportMatrix};

/// The sets `I` of support positions for which putting `y` on `I` (and 1 on
/// the other ones) gives the target's one-variable slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleFamily {
    pub support: SupportMatrix,
    pub target: TargetPolynomial,
    pub slice: UniPoly,
    /// Sorted.
    pub sets: Vec<PositionSet>,
    /// Subsets visited by the enumeration.
    pub nodes: u64,
}

impl AdmissibleFamily {
    pub fn masks(&self) -> Vec<u64> {
        let n = self.support.n();
        self.sets.iter().map(|s| s.mask(n)).collect()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// The slice shared by all variables of `t`; an error when they differ.
pub fn common_slice(t: &TargetPolynomial) -> Result<UniPoly> {
    let vars = t.effective_variables();
    let first = t.slice(vars[0])?;
    for &k in &vars[1..] {
        if t.slice(k)? != first {
            return Err(Error::InvalidArgument(format!(
                "{t} has different slices in different variables"
            )));
        }
    }
    Ok(first)
}

const FAMILY_SEED: u64 = 0x6661_6d69_6c79;

pub fn compute_admissible_family(b: &SupportMatrix, t: &TargetPolynomial) -> Result<AdmissibleFamily> {
    let field = PrimeField::mersenne61();
    let mut rng = ChaCha8Rng::seed_from_u64(FAMILY_SEED);
    compute_admissible_family_at(b, t, &field, field.elem(rng.gen_range(1..field.modulus())))
}

/// Enumerates subsets `I` of the support in row-major recursion order.
///
/// With `z = y - 1`, `det(B + z E_I)` has constant term `det(B)` and linear
/// term `sum_{(r,c) in I} cof_{rc}(B)`, which prune the recursion exactly.
/// The full polynomial is compared at the single point `z` using rank-one
/// updates of a scaled inverse; every hit is confirmed by interpolating
/// integer determinants at `y = 0..=n`. The result does not depend on `z`.
pub fn compute_admissible_family_at(
    b: &SupportMatrix,
    t: &TargetPolynomial,
    field: &PrimeField,
    z: FieldElement,
) -> Result<AdmissibleFamily> {
    let n = b.n();
    if !(2..=8).contains(&n) {
        return Err(Error::SizeLimit(format!("admissible families need 2 <= n <= 8, got {n}")));
    }
    if z.is_zero() {
        return Err(Error::InvalidArgument("evaluation point must have y != 1".into()));
    }
    let slice = common_slice(t)?;
    let mut family = AdmissibleFamily {
        support: b.clone(),
        target: *t,
        slice: slice.clone(),
        sets: Vec::new(),
        nodes: 0,
    };
    let det_b = b.det();
    if det_b != slice.eval(1) {
        return Ok(family);
    }
    let positions = b.ones();
    let int_b = b.to_int_matrix();
    let cof = cofactors(&int_b)?;
    let slopes: Vec<i128> = positions.iter().map(|p| cof[p.row * n + p.col]).collect();
    let mut pos_suffix = vec![0i128; positions.len() + 1];
    let mut neg_suffix = vec![0i128; positions.len() + 1];
    for i in (0..positions.len()).rev() {
        pos_suffix[i] = pos_suffix[i + 1] + slopes[i].max(0);
        neg_suffix[i] = neg_suffix[i + 1] + slopes[i].min(0);
    }
    let want_slope = slice.derivative().eval(1);
    let y = field.add(z, FieldElement::ONE);
    let target_at_y = slice.eval_mod(field, y);

    // B^{-1} = adj(B) / det(B).
    let x: Vec<FieldElement> = (0..n * n)
        .map(|i| field.from_i128(cof[(i % n) * n + i / n]))
        .collect();
    let state = State {
        x,
        lambda: field.from_i128(det_b),
        d: field.from_i128(det_b),
        delta: FieldElement::ONE,
    };
    let mut search = FamilySearch {
        n,
        field,
        z,
        b: &int_b,
        positions: &positions,
        slopes: &slopes,
        pos_suffix: &pos_suffix,
        neg_suffix: &neg_suffix,
        want_slope,
        target_at_y,
        slice: &slice,
        chosen: Vec::new(),
        found: Vec::new(),
        nodes: 0,
    };
    search.descend(0, 0, Some(&state))?;
    family.nodes = search.nodes;
    let mut sets: Vec<PositionSet> = search
        .found
        .into_iter()
        .map(PositionSet::new)
        .collect::<Result<_>>()?;
    sets.sort();
    family.sets = sets;
    Ok(family)
}

/// `cof[r * n + c]` is the `(r, c)` cofactor.
fn cofactors(m: &SquareMatrix<i64>) -> Result<Vec<i128>> {
    let n = m.n();
    let mut out = vec![0i128; n * n];
    for r in 0..n {
        for c in 0..n {
            let minor = SquareMatrix::from_fn(n - 1, |i, j| {
                m[(if i < r { i } else { i + 1 }, if j < c { j } else { j + 1 })]
            });
            let d = det_int(&minor)?;
            out[r * n + c] = if (r + c) % 2 == 0 { d } else { -d };
        }
    }
    Ok(out)
}

/// `M^{-1} = X / lambda`, `det(M) = d / delta`.
#[derive(Clone)]
struct State {
    x: Vec<FieldElement>,
    lambda: FieldElement,
    d: FieldElement,
    delta: FieldElement,
}

struct FamilySearch<'a> {
    n: usize,
    field: &'a PrimeField,
    z: FieldElement,
    b: &'a SquareMatrix<i64>,
    positions: &'a [Position],
    slopes: &'a [i128],
    pos_suffix: &'a [i128],
    neg_suffix: &'a [i128],
    want_slope: i128,
    target_at_y: FieldElement,
    slice: &'a UniPoly,
    chosen: Vec<Position>,
    found: Vec<Vec<Position>>,
    nodes: u64,
}

impl FamilySearch<'_> {
    /// Children of the current subset: add one position with index `>= start`.
    /// `state` is `None` once `M` has become singular at `z`; determinants are
    /// then computed directly.
    fn descend(&mut self, start: usize, slope: i128, state: Option<&State>) -> Result<()> {
        for i in start..self.positions.len() {
            let s = slope + self.slopes[i];
            if s + self.neg_suffix[i + 1] > self.want_slope || s + self.pos_suffix[i + 1] < self.want_slope {
                continue;
            }
            self.nodes += 1;
            let p = self.positions[i];
            let next = state.and_then(|st| self.update(st, p));
            self.chosen.push(p);
            if s == self.want_slope && self.matches(next.as_ref()) && self.confirm()? {
                self.found.push(self.chosen.clone());
            }
            self.descend(i + 1, s, next.as_ref())?;
            self.chosen.pop();
        }
        Ok(())
    }

    /// Adds `z` at `(a, b)`; `None` if the result is singular.
    fn update(&self, st: &State, p: Position) -> Option<State> {
        let (f, n) = (self.field, self.n);
        let (a, b) = (p.row, p.col);
        let g = f.add(st.lambda, f.mul(self.z, st.x[b * n + a]));
        if g.is_zero() {
            return None;
        }
        let col: Vec<FieldElement> = (0..n).map(|i| f.mul(self.z, st.x[i * n + a])).collect();
        let row = &st.x[b * n..(b + 1) * n];
        let mut x = Vec::with_capacity(n * n);
        for (i, &ci) in col.iter().enumerate() {
            for (j, &rj) in row.iter().enumerate() {
                x.push(f.sub(f.mul(g, st.x[i * n + j]), f.mul(ci, rj)));
            }
        }
        Some(State {
            x,
            lambda: f.mul(st.lambda, g),
            d: f.mul(st.d, g),
            delta: f.mul(st.delta, st.lambda),
        })
    }

    fn matches(&self, state: Option<&State>) -> bool {
        let f = self.field;
        match state {
            Some(st) => st.d == f.mul(self.target_at_y, st.delta),
            None => {
                let mut m = self.b.map(|&v| f.from_i64(v));
                for p in &self.chosen {
                    m.set(p.row, p.col, f.add(FieldElement::ONE, self.z));
                }
                det_mod_p(f, &m) == self.target_at_y
            }
        }
    }

    fn confirm(&self) -> Result<bool> {
        let mut pts = Vec::with_capacity(self.n + 1);
        for y in 0..=self.n as i64 {
            let mut m = self.b.clone();
            for p in &self.chosen {
                m.set(p.row, p.col, y);
            }
            pts.push((y as i128, det_int(&m)?));
        }
        Ok(interpolate(&pts)? == *self.slice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{det_symbolic, MultiPoly};
    use crate::constructions::per2_3x3;
    use crate::matrix::{Entry, VarMatrix};

    /// Every subset of the support, checked with a symbolic determinant.
    fn brute_force(b: &SupportMatrix, t: &TargetPolynomial) -> Vec<PositionSet> {
        let n = b.n();
        let ones = b.ones();
        let slice = common_slice(t).unwrap();
        let want = MultiPoly::from_terms(
            1,
            slice.coeffs().iter().enumerate().map(|(d, &c)| (vec![d as u16], c)),
        );
        let mut out = Vec::new();
        for sub in 0u64..1 << ones.len() {
            let rows = (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| {
                            let idx = ones.iter().position(|p| p.row == r && p.col == c);
                            match idx {
                                Some(i) if sub >> i & 1 == 1 => Entry::Var(1),
                                Some(_) => Entry::One,
                                None => Entry::Zero,
                            }
                        })
                        .collect()
                })
                .collect();
            let a = VarMatrix::binary(rows).unwrap().with_naming(crate::matrix::VarNaming::Sequential, 1).unwrap();
            if det_symbolic(&a).unwrap() == want {
                let set: Vec<Position> = (0..ones.len()).filter(|&i| sub >> i & 1 == 1).map(|i| ones[i]).collect();
                out.push(PositionSet::new(set).unwrap());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn per2_toy_matches_brute_force() {
        let t = TargetPolynomial::permanent(2);
        let b = per2_3x3().support().unwrap();
        let fam = compute_admissible_family(&b, &t).unwrap();
        assert_eq!(fam.sets, brute_force(&b, &t));
        assert!(!fam.is_empty());
        assert!(fam.sets.iter().all(|s| !s.is_empty()));
    }

    #[test]
    fn four_by_four_toys_match_brute_force() {
        use rand::Rng;
        let t = TargetPolynomial::permanent(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 25 {
            let rows: Vec<u32> = (0..4).map(|_| rng.gen_range(0..16)).collect();
            let b = SupportMatrix::from_row_bits(4, rows).unwrap();
            if b.det() != 2 {
                continue;
            }
            checked += 1;
            let field = PrimeField::mersenne61();
            let z = field.elem(rng.gen_range(1..1000));
            assert_eq!(compute_admissible_family_at(&b, &t, &field, z).unwrap().sets, brute_force(&b, &t));
        }
    }

    #[test]
    fn independent_of_evaluation_point() {
        let t = TargetPolynomial::permanent(3);
        let b = crate::constructions::grenet_7x7().support().unwrap();
        let field = PrimeField::mersenne61();
        let a = compute_admissible_family_at(&b, &t, &field, field.elem(7)).unwrap();
        let c = compute_admissible_family_at(&b, &t, &field, field.elem(123_456_789)).unwrap();
        assert_eq!(a.sets, c.sets);
        // A small prime makes singular intermediate matrices likely.
        let small = PrimeField::new(13).unwrap();
        for z in 1..13 {
            let d = compute_admissible_family_at(&b, &t, &small, small.elem(z)).unwrap();
            assert_eq!(d.sets, a.sets, "z = {z} mod 13");
        }
    }

    #[test]
    fn wrong_determinant_gives_empty_family() {
        let t = TargetPolynomial::permanent(3);
        let b = SupportMatrix::from_row_bits(6, vec![32, 16, 8, 4, 2, 1]).unwrap();
        assert!(compute_admissible_family(&b, &t).unwrap().is_empty());
    }
}
