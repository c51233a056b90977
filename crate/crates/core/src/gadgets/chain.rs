use super::abp::{Abp, AbpEdge};
use crate::error::{Error, Result};
use crate::matrix::{Entry, VarNaming};

/// `1 = c_0, c_1, ..., c_l = c` with `c_i = c_{j_i} + c_{k_i}`, `j_i, k_i < i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditionChain {
    values: Vec<u64>,
    /// `parents[i - 1] = (j_i, k_i)`.
    parents: Vec<(usize, usize)>,
}

impl AdditionChain {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn parents(&self) -> &[(usize, usize)] {
        &self.parents
    }

    /// Number of additions.
    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn target(&self) -> u64 {
        *self.values.last().expect("chain starts at 1")
    }

    /// Replays the sums and checks distinctness.
    pub fn is_valid(&self) -> bool {
        if self.values.first() != Some(&1) || self.parents.len() + 1 != self.values.len() {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        for (i, &v) in self.values.iter().enumerate() {
            if !seen.insert(v) {
                return false;
            }
            if i > 0 {
                let (j, k) = self.parents[i - 1];
                if j >= i || k >= i || self.values[j].checked_add(self.values[k]) != Some(v) {
                    return false;
                }
            }
        }
        true
    }
}

/// Binary method: one doubling per bit after the leading one, followed by
/// `+1` when that bit is set. Length at most `2 * floor(log2 c)`.
pub fn addition_chain(c: u64) -> Result<AdditionChain> {
    if c == 0 {
        return Err(Error::InvalidArgument("addition chains start at 1".into()));
    }
    let mut values = vec![1u64];
    let mut parents = Vec::new();
    let top = 63 - c.leading_zeros();
    for bit in (0..top).rev() {
        let i = values.len() - 1;
        values.push(values[i] * 2);
        parents.push((i, i));
        if (c >> bit) & 1 == 1 {
            values.push(values[i + 1] + 1);
            parents.push((i + 1, 0));
        }
    }
    Ok(AdditionChain { values, parents })
}

/// A label-1 branching program with exactly `|c|` source-target paths, all
/// of the same length, whose path value is `c`.
///
/// Each doubling step of the chain becomes a layer holding two vertices that
/// both carry the running count; a following `+1` step adds an edge from a
/// side chain that carries a single path. The path length is fixed to be odd
/// by an optional extra source, and for `c < 0` one more vertex is appended.
/// At most `3 * floor(log2 |c|) + 4` vertices.
pub fn constant_abp(c: i64) -> Result<Abp> {
    if c == 0 {
        return Err(Error::InvalidArgument("no branching program has path value 0 with a path".into()));
    }
    let chain = addition_chain(c.unsigned_abs())?;
    // Group the chain into (doubling, optional +1) steps.
    let mut steps: Vec<bool> = Vec::new();
    for (i, &(j, k)) in chain.parents().iter().enumerate() {
        if j == k {
            steps.push(false);
        } else {
            debug_assert!(k == 0 && j == i);
            *steps.last_mut().expect("+1 follows a doubling") = true;
        }
    }
    let r = steps.len();
    let prepend = r % 2 == 1;

    let mut edges = Vec::new();
    let mut next = 0usize;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let one = |from, to| AbpEdge { from, to, label: Entry::One };
    let source = fresh();
    let s = if prepend {
        let s = fresh();
        edges.push(one(source, s));
        s
    } else {
        source
    };

    let t;
    if r == 0 {
        t = fresh();
        edges.push(one(s, t));
    } else {
        let (mut a, mut b) = (fresh(), fresh());
        edges.push(one(s, a));
        edges.push(one(s, b));
        let mut remaining_ones = steps.iter().filter(|&&x| x).count();
        let mut u = None;
        if remaining_ones > 0 {
            let v = fresh();
            edges.push(one(s, v));
            u = Some(v);
        }
        let mut last = 0;
        for (g, &plus_one) in steps.iter().enumerate() {
            let dests = if g + 1 == r {
                last = fresh();
                vec![last]
            } else {
                vec![fresh(), fresh()]
            };
            for &d in &dests {
                edges.push(one(a, d));
                edges.push(one(b, d));
                if plus_one {
                    edges.push(one(u.expect("side chain present"), d));
                }
            }
            if plus_one {
                remaining_ones -= 1;
            }
            if g + 1 < r {
                a = dests[0];
                b = dests[1];
                if remaining_ones > 0 {
                    let v = fresh();
                    edges.push(one(u.expect("side chain present"), v));
                    u = Some(v);
                }
            }
        }
        t = last;
    }
    let target = if c < 0 {
        let tp = fresh();
        edges.push(one(t, tp));
        tp
    } else {
        t
    };
    Abp::new(next, source, target, edges, VarNaming::Sequential, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{abp_path_count, abp_path_value};
    use crate::algebra::MultiPoly;
    use proptest::prelude::*;

    #[test]
    fn small_chains() {
        let one = addition_chain(1).unwrap();
        assert_eq!(one.values(), &[1]);
        assert!(one.is_empty());
        let two = addition_chain(2).unwrap();
        assert_eq!(two.values(), &[1, 2]);
        assert_eq!(two.parents(), &[(0, 0)]);
        let fifteen = addition_chain(15).unwrap();
        assert_eq!(fifteen.values(), &[1, 2, 3, 6, 7, 14, 15]);
        assert!(fifteen.len() <= 6);
        assert!(fifteen.is_valid());
        assert!(addition_chain(0).is_err());
    }

    #[test]
    fn validity_check_catches_bad_sums() {
        let bad = AdditionChain {
            values: vec![1, 2, 4],
            parents: vec![(0, 0), (0, 1)],
        };
        assert!(!bad.is_valid());
    }

    #[test]
    fn unit_gadgets() {
        let g = constant_abp(1).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(abp_path_value(&g).unwrap(), MultiPoly::constant(0, 1));
        let g = constant_abp(-1).unwrap();
        assert_eq!(abp_path_value(&g).unwrap(), MultiPoly::constant(0, -1));
        assert!(constant_abp(0).is_err());
    }

    #[test]
    fn six_and_minus_six() {
        for c in [6i64, -6] {
            let g = constant_abp(c).unwrap();
            assert_eq!(abp_path_value(&g).unwrap(), MultiPoly::constant(0, c as i128));
            assert_eq!(abp_path_count(&g), 6);
            assert!(g.layers().is_some());
        }
    }

    #[test]
    fn gadget_values_and_sizes_up_to_1000() {
        for a in 1..=1000i64 {
            for c in [a, -a] {
                let g = constant_abp(c).unwrap();
                let bound = 4 * (63 - a.unsigned_abs().leading_zeros() as usize + 2);
                assert!(g.vertex_count() <= bound, "c = {c}: {} > {bound}", g.vertex_count());
                assert_eq!(abp_path_value(&g).unwrap(), MultiPoly::constant(0, c as i128), "c = {c}");
            }
        }
    }

    proptest! {
        #[test]
        fn binary_method_chains_are_valid(c in 1u64..1_000_000_000) {
            let chain = addition_chain(c).unwrap();
            prop_assert!(chain.is_valid());
            prop_assert_eq!(chain.target(), c);
            prop_assert!(chain.len() <= 2 * (63 - c.leading_zeros() as usize));
        }

        #[test]
        fn large_gadgets_have_right_path_count(c in 1i64..1_000_000_000_000) {
            let g = constant_abp(c).unwrap();
            prop_assert_eq!(abp_path_count(&g), c as u128);
            let lengths = g.layers().expect("layered");
            prop_assert_eq!(lengths[g.target()] % 2, 1);
        }
    }
}
