use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::abp::{Abp, LabeledDigraph};
use super::chain::constant_abp;
use crate::algebra::{det_mod_p, FieldElement, MultiPoly, PrimeField};
use crate::error::{Error, Result};
use crate::matrix::{substitute_mod, Entry, Flavor, VarMatrix};

/// Largest number of source-target paths [`abp_path_value`] will enumerate.
pub const PATH_BUDGET: u128 = 1_000_000;

/// Number of source-target paths, by dynamic programming.
pub fn abp_path_count(abp: &Abp) -> u128 {
    let order = abp.topological_order().expect("validated acyclic");
    let mut count = vec![0u128; abp.vertex_count()];
    count[abp.source()] = 1;
    for v in order {
        if count[v] == 0 {
            continue;
        }
        for e in abp.out_edges(v) {
            count[e.to] = count[e.to].saturating_add(count[v]);
        }
    }
    count[abp.target()]
}

fn label_factor(poly: &MultiPoly, label: Entry) -> MultiPoly {
    match label {
        Entry::Var(k) => poly.mul_var(k as usize),
        _ => poly.clone(),
    }
}

/// Sum over all source-target paths of `(-1)^(edges - 1)` times the product
/// of the labels, by explicit path enumeration.
pub fn abp_path_value(abp: &Abp) -> Result<MultiPoly> {
    let paths = abp_path_count(abp);
    if paths > PATH_BUDGET {
        return Err(Error::SizeLimit(format!(
            "{paths} source-target paths exceed the enumeration budget of {PATH_BUDGET}"
        )));
    }
    let nvars = abp.var_count() as usize;
    let mut adj = vec![Vec::new(); abp.vertex_count()];
    for e in abp.edges() {
        adj[e.from].push((e.to, e.label));
    }
    let mut out = MultiPoly::zero(nvars);
    let mut exps = vec![0u16; nvars];
    walk(&adj, abp.source(), abp.target(), 0, &mut exps, &mut out);
    Ok(out)
}

fn walk(
    adj: &[Vec<(usize, Entry)>],
    v: usize,
    t: usize,
    len: usize,
    exps: &mut Vec<u16>,
    out: &mut MultiPoly,
) {
    if v == t {
        out.add_term(exps.clone(), if len % 2 == 1 { 1 } else { -1 });
        return;
    }
    for &(w, label) in &adj[v] {
        if let Entry::Var(k) = label {
            exps[k as usize - 1] += 1;
        }
        walk(adj, w, t, len + 1, exps, out);
        if let Entry::Var(k) = label {
            exps[k as usize - 1] -= 1;
        }
    }
}

/// Same value as [`abp_path_value`] by dynamic programming over a topological
/// order; each edge contributes a factor `-label`.
pub fn abp_path_value_dp(abp: &Abp) -> MultiPoly {
    let nvars = abp.var_count() as usize;
    let mut acc: Vec<MultiPoly> = vec![MultiPoly::zero(nvars); abp.vertex_count()];
    acc[abp.source()] = MultiPoly::constant(nvars, 1);
    for v in abp.topological_order().expect("validated acyclic") {
        if acc[v].is_zero() {
            continue;
        }
        let here = acc[v].clone();
        for e in abp.out_edges(v) {
            let contrib = label_factor(&here, e.label).neg();
            acc[e.to].add_assign(&contrib);
        }
    }
    acc[abp.target()].neg()
}

/// Identifies source and target (as index 0), puts a label-1 loop on every
/// other vertex and returns the directed adjacency matrix. Its determinant
/// equals the path value.
pub fn abp_adjacency_matrix(abp: &Abp) -> Result<VarMatrix> {
    let n = abp.vertex_count();
    if n < 2 {
        return Err(Error::InvalidArgument("branching program needs at least 2 vertices".into()));
    }
    let (s, t) = (abp.source(), abp.target());
    let mut index = vec![0usize; n];
    let mut next = 1;
    for (v, slot) in index.iter_mut().enumerate() {
        if v != s && v != t {
            *slot = next;
            next += 1;
        }
    }
    let size = n - 1;
    let mut g = LabeledDigraph::new(size);
    for v in 1..size {
        g.add_edge(v, v, Entry::One)?;
    }
    for e in abp.edges() {
        g.add_edge(index[e.from], index[e.to], e.label)?;
    }
    g.adjacency_matrix(Flavor::Binary, abp.naming(), abp.var_count())
}

const SIGN_SEED: u64 = 0x5349_474e;

/// [`abp_adjacency_matrix`] with the first two rows swapped when that is
/// needed to make the determinant `+expected` rather than `-expected`.
///
/// The sign is decided by random evaluation over `F_p` with `p = 2^61 - 1`.
/// If the path value is neither `expected` nor `-expected` this fails.
pub fn abp_to_matrix(abp: &Abp, expected: &MultiPoly) -> Result<VarMatrix> {
    if expected.nvars() != abp.var_count() as usize {
        return Err(Error::Dimension(format!(
            "expected polynomial has {} variables, branching program has {}",
            expected.nvars(),
            abp.var_count()
        )));
    }
    let mut a = abp_adjacency_matrix(abp)?;
    let field = PrimeField::mersenne61();
    let mut rng = ChaCha8Rng::seed_from_u64(SIGN_SEED);
    let (mut plus, mut minus) = (true, true);
    for _ in 0..3 {
        let point: Vec<FieldElement> = (0..abp.var_count())
            .map(|_| field.elem(rng.gen_range(2..field.modulus())))
            .collect();
        let d = det_mod_p(&field, &substitute_mod(&a, &field, &point)?);
        let f = expected.eval_mod(&field, &point)?;
        plus &= d == f;
        minus &= d == field.neg(f);
    }
    match (plus, minus) {
        (true, _) => Ok(a),
        (false, true) => {
            if a.n() < 2 {
                return Err(Error::InvalidArgument(
                    "a 1x1 matrix cannot have its sign corrected by a row swap".into(),
                ));
            }
            a.swap_rows(0, 1);
            Ok(a)
        }
        (false, false) => Err(Error::InvalidArgument(
            "path value is neither the expected polynomial nor its negative".into(),
        )),
    }
}

/// Replaces every integer entry outside `{0, 1}` by a constant gadget, in
/// row-major order. The determinant is unchanged.
pub fn binarize(c: &VarMatrix) -> Result<VarMatrix> {
    if c.flavor() == Flavor::Binary {
        return Ok(c.clone());
    }
    let mut g = LabeledDigraph::from_matrix(c);
    for i in 0..c.n() {
        for j in 0..c.n() {
            let Entry::Int(value) = *c.get(i, j) else {
                continue;
            };
            g.remove_edge(i, j);
            let gadget = constant_abp(value)?;
            let base = g.add_vertices(gadget.vertex_count());
            for e in gadget.edges() {
                g.add_edge(base + e.from, base + e.to, e.label)?;
            }
            for v in 0..gadget.vertex_count() {
                g.add_edge(base + v, base + v, Entry::One)?;
            }
            g.add_edge(i, base + gadget.source(), Entry::One)?;
            g.add_edge(base + gadget.target(), j, Entry::One)?;
        }
    }
    g.adjacency_matrix(Flavor::Binary, c.naming(), c.var_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{det_int, det_symbolic, det_symbolic_sparse};
    use crate::gadgets::AbpEdge;
    use crate::matrix::{parse_matrix, substitute, VarNaming};
    use proptest::prelude::*;
    use rand::Rng;

    fn path(labels: &[Entry], nvars: u32) -> Abp {
        let edges = labels
            .iter()
            .enumerate()
            .map(|(i, &label)| AbpEdge { from: i, to: i + 1, label })
            .collect();
        Abp::new(labels.len() + 1, 0, labels.len(), edges, VarNaming::Sequential, nvars).unwrap()
    }

    #[test]
    fn single_edge_and_two_edge_paths() {
        let x = MultiPoly::var(2, 1);
        assert_eq!(abp_path_value(&path(&[Entry::Var(1)], 2)).unwrap(), x);
        let xy = path(&[Entry::Var(1), Entry::Var(2)], 2);
        assert_eq!(abp_path_value(&xy).unwrap(), x.mul(&MultiPoly::var(2, 2)).neg());
        assert_eq!(abp_path_value_dp(&xy), abp_path_value(&xy).unwrap());
    }

    #[test]
    fn adjacency_determinant_is_path_value() {
        let xy = path(&[Entry::Var(1), Entry::Var(2), Entry::One], 2);
        let a = abp_adjacency_matrix(&xy).unwrap();
        assert_eq!(a.n(), 3);
        assert_eq!(det_symbolic(&a).unwrap(), abp_path_value(&xy).unwrap());
    }

    #[test]
    fn sign_fix_swaps_rows() {
        let xy = path(&[Entry::Var(1), Entry::Var(2)], 2);
        let product = MultiPoly::var(2, 1).mul(&MultiPoly::var(2, 2));
        let a = abp_to_matrix(&xy, &product).unwrap();
        assert_eq!(det_symbolic(&a).unwrap(), product);
        let b = abp_to_matrix(&xy, &product.neg()).unwrap();
        assert_eq!(det_symbolic(&b).unwrap(), product.neg());
        assert!(abp_to_matrix(&xy, &MultiPoly::var(2, 1)).is_err());
        assert!(abp_to_matrix(&xy, &MultiPoly::var(3, 1)).is_err());
    }

    #[test]
    fn constant_six_matrix() {
        let six = constant_abp(6).unwrap();
        let a = abp_to_matrix(&six, &MultiPoly::constant(0, 6)).unwrap();
        assert_eq!(det_int(&substitute(&a, &[]).unwrap()).unwrap(), 6);
    }

    #[test]
    fn binary_input_is_unchanged() {
        let a = parse_matrix("3\n0 x1 x3\nx2 0 1\nx4 1 0\n").unwrap();
        assert_eq!(binarize(&a).unwrap(), a);
    }

    #[test]
    fn minus_five() {
        let c = parse_matrix("1 integer\n-5\n").unwrap();
        let b = binarize(&c).unwrap();
        assert_eq!(b.flavor(), Flavor::Binary);
        assert_eq!(det_int(&substitute(&b, &[]).unwrap()).unwrap(), -5);
    }

    #[test]
    fn fig1_matrix() {
        let c = parse_matrix(include_str!("../../data/fig1_c.txt")).unwrap();
        let b = binarize(&c).unwrap();
        let x = MultiPoly::var(2, 1);
        let y = MultiPoly::var(2, 2);
        let mut want = x.mul(&y).scale(3);
        want.add_assign(&x.mul(&x).scale(2));
        assert_eq!(det_symbolic(&c).unwrap(), want);
        assert_eq!(det_symbolic_sparse(&b).unwrap(), want);
    }

    fn arb_integer_matrix() -> impl Strategy<Value = VarMatrix> {
        let entry = prop_oneof![
            3 => (-9i64..=9).prop_map(Entry::Int),
            1 => (1u32..=3).prop_map(Entry::Var),
        ];
        prop::collection::vec(prop::collection::vec(entry, 4), 4).prop_map(|rows| {
            VarMatrix::new(Flavor::Integer, VarNaming::Sequential, 3, rows).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn binarize_preserves_determinant(c in arb_integer_matrix(), seed in any::<u64>()) {
            let b = binarize(&c).unwrap();
            prop_assert_eq!(b.flavor(), Flavor::Binary);
            let want = det_symbolic(&c).unwrap();
            if b.n() <= 8 {
                prop_assert_eq!(det_symbolic(&b).unwrap(), want);
            } else {
                let field = PrimeField::mersenne61();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..3 {
                    let pt: Vec<FieldElement> = (0..3).map(|_| field.elem(rng.gen())).collect();
                    let d = det_mod_p(&field, &substitute_mod(&b, &field, &pt).unwrap());
                    prop_assert_eq!(d, want.eval_mod(&field, &pt).unwrap());
                }
            }
        }

        #[test]
        fn random_layered_programs(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let widths: Vec<usize> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(1..4)).collect();
            let mut layers = vec![vec![0usize]];
            let mut next = 1;
            for w in widths {
                layers.push((next..next + w).collect());
                next += w;
            }
            layers.push(vec![next]);
            let mut edges = Vec::new();
            for pair in layers.windows(2) {
                for &u in &pair[0] {
                    for &v in &pair[1] {
                        if rng.gen_bool(0.7) {
                            let label = if rng.gen() { Entry::One } else { Entry::Var(rng.gen_range(1..=3)) };
                            edges.push(AbpEdge { from: u, to: v, label });
                        }
                    }
                }
            }
            let abp = Abp::new(next + 1, 0, next, edges, VarNaming::Sequential, 3).unwrap();
            let value = abp_path_value(&abp).unwrap();
            prop_assert_eq!(&abp_path_value_dp(&abp), &value);
            let a = abp_adjacency_matrix(&abp).unwrap();
            let det = if a.n() <= 8 { det_symbolic(&a).unwrap() } else { det_symbolic_sparse(&a).unwrap() };
            prop_assert_eq!(det, value);
        }
    }
}
