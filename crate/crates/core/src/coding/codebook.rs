use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{nearest, sample_embedded};
use crate::error::{Error, Result};
use crate::grassmann::embedding::embed;
use crate::grassmann::{sample_haar_with, SubspaceBasis};
use crate::rng::rng_from_seed;

/// An ordered list of `p`-dimensional codewords in `C^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CodebookRecord", into = "CodebookRecord")]
pub struct Codebook {
    codewords: Vec<SubspaceBasis>,
    seed: Option<u64>,
    iterations: Option<usize>,
    embedded: Vec<f64>,
}

impl Codebook {
    /// Checks that the list is nonempty and that all codewords share `(n, p)`.
    pub fn new(codewords: Vec<SubspaceBasis>) -> Result<Self> {
        let first = codewords.first().ok_or(Error::EmptyCodebook)?;
        let (n, p) = (first.n(), first.k());
        for c in &codewords {
            if c.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: c.n() });
            }
            if c.k() != p {
                return Err(Error::invalid(format!("codeword dimensions differ: {p} vs {}", c.k())));
            }
        }
        let embedded = codewords.iter().flat_map(embed).collect();
        Ok(Codebook { codewords, seed: None, iterations: None, embedded })
    }

    /// `size` independent Haar codewords.
    pub fn random<R: Rng + ?Sized>(n: usize, p: usize, size: usize, rng: &mut R) -> Result<Self> {
        let codewords = (0..size).map(|_| sample_haar_with(n, p, rng)).collect::<Result<Vec<_>>>()?;
        Self::new(codewords)
    }

    /// Records how the codebook was produced.
    pub fn with_provenance(mut self, seed: Option<u64>, iterations: Option<usize>) -> Self {
        self.seed = seed;
        self.iterations = iterations;
        self
    }

    pub fn codewords(&self) -> &[SubspaceBasis] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn n(&self) -> usize {
        self.codewords[0].n()
    }

    pub fn p(&self) -> usize {
        self.codewords[0].k()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn iterations(&self) -> Option<usize> {
        self.iterations
    }

    pub(crate) fn embedded(&self) -> &[f64] {
        &self.embedded
    }
}

/// Index of the codeword nearest to `q` in chordal distance; ties go to the
/// lowest index.
pub fn quantize(code: &Codebook, q: &SubspaceBasis) -> Result<usize> {
    if code.is_empty() {
        return Err(Error::EmptyCodebook);
    }
    if q.n() != code.n() {
        return Err(Error::DimensionMismatch { left: code.n(), right: q.n() });
    }
    let n = code.n();
    let m = code.p().min(q.k()) as f64;
    Ok(nearest(code.embedded(), n * n, m, &embed(q)).0)
}

/// Empirical CDF of the quantization error `min_k d_c^2(C_k, Q)` over
/// `samples` Haar sources of dimension `p`, at each `z` of `z_grid`.
pub fn error_cdf(code: &Codebook, z_grid: &[f64], samples: usize, seed: u64) -> Result<Vec<f64>> {
    if samples == 0 {
        return Err(Error::invalid("error CDF needs at least one sample"));
    }
    let (n, p) = (code.n(), code.p());
    if let Some(z) = z_grid.iter().find(|z| !(0.0..=p as f64).contains(*z)) {
        return Err(Error::invalid(format!("z = {z} is outside [0, {p}]")));
    }
    let sources = sample_embedded(n, p, samples, &mut rng_from_seed(seed));
    let mut errors: Vec<f64> =
        sources.chunks_exact(n * n).map(|s| nearest(code.embedded(), n * n, p as f64, s).1).collect();
    errors.sort_by(f64::total_cmp);
    Ok(z_grid
        .iter()
        .map(|&z| errors.partition_point(|&e| e <= z) as f64 / samples as f64)
        .collect())
}

/// JSON layout: `{n, p, N, seed, iterations, codewords}`.
#[derive(Serialize, Deserialize)]
struct CodebookRecord {
    n: usize,
    p: usize,
    #[serde(rename = "N")]
    size: usize,
    seed: Option<u64>,
    iterations: Option<usize>,
    codewords: Vec<SubspaceBasis>,
}

impl From<Codebook> for CodebookRecord {
    fn from(c: Codebook) -> Self {
        CodebookRecord {
            n: c.n(),
            p: c.p(),
            size: c.len(),
            seed: c.seed,
            iterations: c.iterations,
            codewords: c.codewords,
        }
    }
}

impl TryFrom<CodebookRecord> for Codebook {
    type Error = Error;
    fn try_from(r: CodebookRecord) -> Result<Self> {
        if r.codewords.len() != r.size {
            return Err(Error::invalid(format!("codebook declares N = {} but lists {}", r.size, r.codewords.len())));
        }
        let code = Codebook::new(r.codewords)?;
        if (code.n(), code.p()) != (r.n, r.p) {
            return Err(Error::invalid(format!(
                "codebook declares (n, p) = ({}, {}) but holds ({}, {})",
                r.n,
                r.p,
                code.n(),
                code.p()
            )));
        }
        Ok(code.with_provenance(r.seed, r.iterations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{chordal_distance_sq, sample_haar, DistanceVariant};

    #[test]
    fn singleton_always_index_zero() {
        let code = Codebook::new(vec![sample_haar(4, 2, 1).unwrap()]).unwrap();
        for seed in 0..20 {
            assert_eq!(quantize(&code, &sample_haar(4, 2, 100 + seed).unwrap()).unwrap(), 0);
        }
    }

    #[test]
    fn codeword_maps_to_itself() {
        let code = Codebook::random(5, 2, 6, &mut rng_from_seed(3)).unwrap();
        for (j, c) in code.codewords().iter().enumerate() {
            assert_eq!(quantize(&code, c).unwrap(), j);
        }
    }

    #[test]
    fn matches_exhaustive_comparison() {
        let a = SubspaceBasis::coordinate(4, &[0, 1]).unwrap();
        let b = SubspaceBasis::coordinate(4, &[2, 3]).unwrap();
        let code = Codebook::new(vec![a.clone(), b.clone()]).unwrap();
        for seed in 0..200 {
            let q = sample_haar(4, 2, seed).unwrap();
            let da = chordal_distance_sq(&a, &q, DistanceVariant::Dc).unwrap();
            let db = chordal_distance_sq(&b, &q, DistanceVariant::Dc).unwrap();
            let expect = if db < da { 1 } else { 0 };
            assert_eq!(quantize(&code, &q).unwrap(), expect);
        }
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let a = SubspaceBasis::coordinate(4, &[0, 1]).unwrap();
        let code = Codebook::new(vec![a.clone(), a.clone(), a]).unwrap();
        assert_eq!(quantize(&code, &sample_haar(4, 2, 9).unwrap()).unwrap(), 0);
    }

    #[test]
    fn invalid_codebooks() {
        assert_eq!(Codebook::new(vec![]).unwrap_err(), Error::EmptyCodebook);
        let mixed = vec![sample_haar(4, 2, 0).unwrap(), sample_haar(4, 1, 0).unwrap()];
        assert!(Codebook::new(mixed).is_err());
        let code = Codebook::random(4, 2, 2, &mut rng_from_seed(0)).unwrap();
        assert!(quantize(&code, &sample_haar(5, 2, 0).unwrap()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let code = Codebook::random(4, 2, 3, &mut rng_from_seed(5)).unwrap().with_provenance(Some(5), Some(7));
        let v = serde_json::to_value(&code).unwrap();
        assert_eq!(v["N"], 3);
        assert_eq!(v["n"], 4);
        assert_eq!(v["p"], 2);
        assert_eq!(v["seed"], 5);
        assert_eq!(v["iterations"], 7);
        assert_eq!(v["codewords"].as_array().unwrap().len(), 3);
        let back: Codebook = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(back, code);
        let mut bad = v;
        bad["N"] = 4.into();
        assert!(serde_json::from_value::<Codebook>(bad).is_err());
    }

    #[test]
    fn cdf_reaches_one_and_is_monotone() {
        let code = Codebook::random(4, 2, 4, &mut rng_from_seed(2)).unwrap();
        let grid: Vec<f64> = (0..=8).map(|k| k as f64 * 0.25).collect();
        let f = error_cdf(&code, &grid, 2000, 1).unwrap();
        assert!(f.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*f.last().unwrap(), 1.0);
        assert_eq!(f[0], 0.0);
        assert!(error_cdf(&code, &[2.5], 10, 0).is_err());
    }
}
