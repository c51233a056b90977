use crate::algebra::permutations;
use crate::error::{Error, Result};
use crate::matrix::SupportMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Equivalence {
    /// Row and column permutations.
    RowColumn,
    /// Row and column permutations and transposition.
    RowColumnTranspose,
}

/// Lookup tables for canonicalizing `n x n` 0/1 matrices, `n <= 7`.
///
/// The canonical form is the minimum packed key over the group, where every
/// image has its rows sorted ascending. Minimizing over column permutations
/// and transposition with sorted rows covers all row permutations.
pub struct Canonicalizer {
    n: usize,
    /// `tables[p][row]` is `row` with its columns permuted by the `p`-th permutation.
    tables: Vec<Vec<u8>>,
}

pub const MAX_CANONICAL_ORDER: usize = 7;

impl Canonicalizer {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_CANONICAL_ORDER {
            return Err(Error::SizeLimit(format!(
                "canonical forms support 1 <= n <= {MAX_CANONICAL_ORDER}, got {n}"
            )));
        }
        let tables = permutations(n)
            .into_iter()
            .map(|tau| {
                (0..1usize << n)
                    .map(|row| {
                        let mut out = 0u8;
                        for (j, &src) in tau.iter().enumerate() {
                            out |= (((row >> (n - 1 - src)) & 1) as u8) << (n - 1 - j);
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        Ok(Self { n, tables })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn sources(&self, b: &SupportMatrix, equivalence: Equivalence) -> Vec<[u8; 8]> {
        assert_eq!(b.n(), self.n, "canonicalizer built for a different size");
        let pack = |m: &SupportMatrix| {
            let mut rows = [0u8; 8];
            for (slot, &r) in rows.iter_mut().zip(m.row_bits()) {
                *slot = r as u8;
            }
            rows
        };
        match equivalence {
            Equivalence::RowColumn => vec![pack(b)],
            Equivalence::RowColumnTranspose => vec![pack(b), pack(&b.transpose())],
        }
    }

    fn for_each_image(&self, b: &SupportMatrix, equivalence: Equivalence, mut f: impl FnMut(u64)) {
        let n = self.n;
        for src in self.sources(b, equivalence) {
            for table in &self.tables {
                let mut img = [0u8; 8];
                for r in 0..n {
                    img[r] = table[src[r] as usize];
                }
                img[..n].sort_unstable();
                f(img[..n].iter().fold(0u64, |k, &r| (k << n) | r as u64));
            }
        }
    }

    /// Whether the row-sorted matrix `rows` with distinct rows is the least
    /// such matrix in its class. Stops at the first smaller image.
    ///
    /// Transposed images count only when the columns of `rows` are distinct;
    /// otherwise they have repeated rows and are never generated. Without
    /// repeated columns this is the same as being the canonical form.
    pub fn is_canonical(&self, rows: &[u8], equivalence: Equivalence) -> bool {
        let n = self.n;
        debug_assert!(rows.windows(2).all(|w| w[0] <= w[1]));
        let key = rows.iter().fold(0u64, |k, &r| (k << n) | r as u64);
        let mut transposed = [0u8; 8];
        for (r, &bits) in rows.iter().enumerate() {
            for (c, col) in transposed.iter_mut().enumerate().take(n) {
                *col |= ((bits >> (n - 1 - c)) & 1) << (n - 1 - r);
            }
        }
        let mut plain = [0u8; 8];
        plain[..n].copy_from_slice(rows);
        let mut cols = transposed;
        cols[..n].sort_unstable();
        let cols_distinct = cols[..n].windows(2).all(|w| w[0] != w[1]);
        let sources: &[[u8; 8]] = match equivalence {
            Equivalence::RowColumnTranspose if cols_distinct => &[plain, transposed][..],
            _ => &[plain][..],
        };
        for src in sources {
            for table in &self.tables {
                let mut img = [0u8; 8];
                for r in 0..n {
                    img[r] = table[src[r] as usize];
                }
                img[..n].sort_unstable();
                if img[..n].iter().fold(0u64, |k, &r| (k << n) | r as u64) < key {
                    return false;
                }
            }
        }
        true
    }

    pub fn canonical_key(&self, b: &SupportMatrix, equivalence: Equivalence) -> u64 {
        let mut best = u64::MAX;
        self.for_each_image(b, equivalence, |k| best = best.min(k));
        best
    }

    /// Keys of every row-sorted image of `b`, with repetitions.
    pub fn orbit_keys(&self, b: &SupportMatrix, equivalence: Equivalence) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.tables.len() * 2);
        self.for_each_image(b, equivalence, |k| out.push(k));
        out
    }

    pub fn canonical(&self, b: &SupportMatrix, equivalence: Equivalence) -> SupportMatrix {
        SupportMatrix::from_key(self.n, self.canonical_key(b, equivalence))
    }
}

/// Canonical form under row/column permutation and transposition.
pub fn canonical_form(b: &SupportMatrix) -> Result<SupportMatrix> {
    canonical_form_with(b, Equivalence::RowColumnTranspose)
}

pub fn canonical_form_with(b: &SupportMatrix, equivalence: Equivalence) -> Result<SupportMatrix> {
    Ok(Canonicalizer::new(b.n())?.canonical(b, equivalence))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::apply_equivalence;
    use proptest::prelude::*;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_support(rng: &mut ChaCha8Rng, n: usize) -> SupportMatrix {
        SupportMatrix::from_row_bits(n, (0..n).map(|_| rng.gen_range(0..1u32 << n)).collect()).unwrap()
    }

    #[test]
    fn idempotent_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let canon = Canonicalizer::new(6).unwrap();
        for _ in 0..1000 {
            let b = random_support(&mut rng, 6);
            let c = canon.canonical(&b, Equivalence::RowColumnTranspose);
            assert_eq!(canon.canonical(&c, Equivalence::RowColumnTranspose), c);
            assert_eq!(c.det().abs(), b.det().abs());
        }
    }

    #[test]
    fn size_limit() {
        assert!(matches!(canonical_form(&SupportMatrix::zeros(8)), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn transpose_only_merges_under_full_group() {
        let b = SupportMatrix::from_grid(&[vec![1, 1], vec![0, 0]]).unwrap();
        let t = b.transpose();
        assert_ne!(
            canonical_form_with(&b, Equivalence::RowColumn).unwrap(),
            canonical_form_with(&t, Equivalence::RowColumn).unwrap()
        );
        assert_eq!(canonical_form(&b).unwrap(), canonical_form(&t).unwrap());
    }

    #[test]
    fn canonical_test_matches_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let canon = Canonicalizer::new(4).unwrap();
        for eq in [Equivalence::RowColumn, Equivalence::RowColumnTranspose] {
            for _ in 0..2000 {
                let mut rows: Vec<u32> = (0..4).map(|_| rng.gen_range(0..16)).collect();
                rows.sort();
                rows.dedup();
                if rows.len() < 4 {
                    continue;
                }
                let b = SupportMatrix::from_row_bits(4, rows.clone()).unwrap();
                let bytes: Vec<u8> = rows.iter().map(|&r| r as u8).collect();
                let least = canon
                    .orbit_keys(&b, eq)
                    .into_iter()
                    .filter(|&k| {
                        let r = SupportMatrix::from_key(4, k).row_bits().to_vec();
                        r.windows(2).all(|w| w[0] != w[1])
                    })
                    .min()
                    .unwrap();
                assert_eq!(canon.is_canonical(&bytes, eq), least == b.key());
                let cols_distinct = {
                    let mut c = b.transpose().row_bits().to_vec();
                    c.sort();
                    c.windows(2).all(|w| w[0] != w[1])
                };
                if cols_distinct {
                    assert_eq!(least, canon.canonical_key(&b, eq));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn orbit_invariance(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..=7);
            let b = random_support(&mut rng, n);
            let mut sigma: Vec<usize> = (0..n).collect();
            let mut tau = sigma.clone();
            sigma.shuffle(&mut rng);
            tau.shuffle(&mut rng);
            let t: bool = rng.gen();
            let img = apply_equivalence(&b, &sigma, &tau, t).unwrap();
            prop_assert_eq!(canonical_form(&img).unwrap(), canonical_form(&b).unwrap());
            prop_assert_eq!(img.det().abs(), b.det().abs());
            if !t {
                prop_assert_eq!(
                    canonical_form_with(&img, Equivalence::RowColumn).unwrap(),
                    canonical_form_with(&b, Equivalence::RowColumn).unwrap()
                );
            }
        }
    }
}
