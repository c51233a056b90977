//! The target polynomials: the permanent `per_m` and the Hamiltonian cycle
//! polynomial `HC_m`, both in the `m^2` variables `x_{ij}` numbered
//! row-major (`x_{ij}` is `x_{(i-1)m + j}`).

use std::fmt;
use std::str::FromStr;

use super::field::{FieldElement, PrimeField};
use super::poly::{MultiPoly, UniPoly};
use super::{is_full_cycle, permutations};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TargetKind {
    Permanent,
    HamiltonianCycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TargetPolynomial {
    kind: TargetKind,
    m: usize,
}

const MAX_ORDER: usize = 8;

impl TargetPolynomial {
    pub fn new(kind: TargetKind, m: usize) -> Result<Self> {
        if m == 0 || m > MAX_ORDER {
            return Err(Error::InvalidArgument(format!(
                "target order must be in 1..={MAX_ORDER}, got {m}"
            )));
        }
        Ok(Self { kind, m })
    }

    pub fn permanent(m: usize) -> Self {
        Self::new(TargetKind::Permanent, m).expect("valid order")
    }

    pub fn hamiltonian_cycle(m: usize) -> Self {
        Self::new(TargetKind::HamiltonianCycle, m).expect("valid order")
    }

    pub fn kind(&self) -> TargetKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn arity(&self) -> usize {
        self.m * self.m
    }

    /// 1-based index of `x_{ij}` (both 1-based).
    pub fn var_index(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.m + j
    }

    /// The permutations whose monomials make up the polynomial (0-based images).
    pub fn permutations(&self) -> Vec<Vec<usize>> {
        let all = permutations(self.m);
        match self.kind {
            TargetKind::Permanent => all,
            TargetKind::HamiltonianCycle => all.into_iter().filter(|p| is_full_cycle(p)).collect(),
        }
    }

    fn check_arity(&self, len: usize) -> Result<()> {
        if len != self.arity() {
            return Err(Error::Dimension(format!(
                "{self} takes {} variables, got {len}",
                self.arity()
            )));
        }
        Ok(())
    }

    /// Direct summation over the contributing permutations.
    pub fn eval_int(&self, point: &[i128]) -> Result<i128> {
        self.check_arity(point.len())?;
        let m = self.m;
        let mut acc = 0i128;
        for p in self.permutations() {
            let mut t = 1i128;
            for (i, &j) in p.iter().enumerate() {
                t = t
                    .checked_mul(point[i * m + j])
                    .ok_or(Error::Overflow("target evaluation"))?;
            }
            acc = acc.checked_add(t).ok_or(Error::Overflow("target evaluation"))?;
        }
        Ok(acc)
    }

    pub fn eval_mod(&self, field: &PrimeField, point: &[FieldElement]) -> Result<FieldElement> {
        self.check_arity(point.len())?;
        let m = self.m;
        let mut acc = FieldElement::ZERO;
        for p in self.permutations() {
            let t = p
                .iter()
                .enumerate()
                .fold(FieldElement::ONE, |t, (i, &j)| field.mul(t, point[i * m + j]));
            acc = field.add(acc, t);
        }
        Ok(acc)
    }

    pub fn all_ones_value(&self) -> i128 {
        self.permutations().len() as i128
    }

    pub fn to_multipoly(&self) -> MultiPoly {
        let n = self.arity();
        let m = self.m;
        MultiPoly::from_terms(
            n,
            self.permutations().into_iter().map(|p| {
                let mut e = vec![0u16; n];
                for (i, &j) in p.iter().enumerate() {
                    e[i * m + j] = 1;
                }
                (e, 1)
            }),
        )
    }

    /// The polynomial with every variable outside `kept` (1-based) set to 1,
    /// still over all `m^2` variables.
    pub fn partial_multipoly(&self, kept: &[usize]) -> MultiPoly {
        let n = self.arity();
        let mut keep = vec![false; n];
        for &k in kept {
            keep[k - 1] = true;
        }
        let mut out = MultiPoly::zero(n);
        for (mono, c) in self.to_multipoly().terms() {
            let e: Vec<u16> = mono
                .iter()
                .enumerate()
                .map(|(i, &x)| if keep[i] { x } else { 0 })
                .collect();
            out.add_term(e, c);
        }
        out
    }

    /// Variables (1-based) that actually occur. `HC_m` never uses `x_{ii}`.
    pub fn effective_variables(&self) -> Vec<usize> {
        self.to_multipoly().support_variables()
    }

    /// The polynomial with `x_k = y` and every other variable set to 1.
    pub fn slice(&self, k: usize) -> Result<UniPoly> {
        if k == 0 || k > self.arity() {
            return Err(Error::InvalidArgument(format!(
                "variable index {k} outside 1..={}",
                self.arity()
            )));
        }
        self.to_multipoly().restrict(k, &vec![1; self.arity()])
    }

    /// Short machine name, e.g. `per3`, `hc4`.
    pub fn short_name(&self) -> String {
        match self.kind {
            TargetKind::Permanent => format!("per{}", self.m),
            TargetKind::HamiltonianCycle => format!("hc{}", self.m),
        }
    }
}

impl fmt::Display for TargetPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TargetKind::Permanent => write!(f, "per_{}", self.m),
            TargetKind::HamiltonianCycle => write!(f, "HC_{}", self.m),
        }
    }
}

impl FromStr for TargetPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let (kind, digits) = if let Some(d) = lower.strip_prefix("per") {
            (TargetKind::Permanent, d)
        } else if let Some(d) = lower.strip_prefix("hc") {
            (TargetKind::HamiltonianCycle, d)
        } else {
            return Err(Error::InvalidArgument(format!(
                "unknown target `{s}` (expected perM or hcM)"
            )));
        };
        let m = digits
            .trim_start_matches('_')
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad target order in `{s}`")))?;
        Self::new(kind, m)
    }
}
