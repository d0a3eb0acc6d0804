use std::collections::BTreeSet;

use rand::Rng;

use super::dataset::{normalize_row, Dataset};
use crate::error::{Error, Result};
use crate::rng::{fill_standard_normal, RngState};

/// Rows to erase, each replaced by a fresh random sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnlearningRequest {
    indices: Vec<usize>,
    pub replacement_seed: u64,
}

impl UnlearningRequest {
    /// Indices must be distinct; they are kept sorted.
    pub fn new(indices: impl IntoIterator<Item = usize>, replacement_seed: u64) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for i in indices {
            if !seen.insert(i) {
                return Err(Error::invalid(format!("index {i} repeated in request")));
            }
        }
        Ok(Self {
            indices: seen.into_iter().collect(),
            replacement_seed,
        })
    }

    /// `count` distinct indices drawn uniformly from `0..n` without
    /// replacement.
    pub fn random(n: usize, count: usize, seed: u64) -> Result<Self> {
        if count > n {
            return Err(Error::invalid(format!("cannot pick {count} of {n} rows")));
        }
        let mut rng = RngState::new(seed).rng();
        let picked = rand::seq::index::sample(&mut rng, n, count);
        Self::new(picked, rng.gen())
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Copy of `data` with each requested row replaced by standard Gaussian
/// features (scaled to unit norm when `renormalize`) and a uniform random
/// label. Replacements are drawn in ascending index order from the request
/// seed; untouched rows are copied bit for bit.
pub fn apply_request(
    data: &Dataset,
    req: &UnlearningRequest,
    renormalize: bool,
) -> Result<Dataset> {
    if let Some(&bad) = req.indices.iter().find(|&&i| i >= data.len()) {
        return Err(Error::invalid(format!(
            "index {bad} outside 0..{}",
            data.len()
        )));
    }
    let mut out = data.clone();
    let mut rng = RngState::new(req.replacement_seed).rng();
    let mut row = vec![0.0; data.dim()];
    for &i in &req.indices {
        fill_standard_normal(&mut rng, &mut row);
        if renormalize {
            normalize_row(&mut row);
        }
        let label = rng.gen_range(0..data.classes());
        out.replace_row(i, &row, label, renormalize);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> Dataset {
        let n = 10;
        let feats: Vec<f64> = (0..n * 3).map(|i| (i as f64 * 0.37).sin()).collect();
        Dataset::new(feats, (0..n as u32).map(|i| i % 2).collect(), 3, 2, false)
            .unwrap()
            .normalize()
    }

    #[test]
    fn empty_request_is_identity() {
        let d = data();
        let req = UnlearningRequest::new([], 4).unwrap();
        assert_eq!(apply_request(&d, &req, true).unwrap(), d);
    }

    #[test]
    fn replacement_is_local_and_deterministic() {
        let d = data();
        let req = UnlearningRequest::new([5], 11).unwrap();
        let a = apply_request(&d, &req, true).unwrap();
        let b = apply_request(&d, &req, true).unwrap();
        assert_eq!(a, b);
        assert!(a.is_normalized());
        for i in (0..d.len()).filter(|&i| i != 5) {
            assert_eq!(a.row(i), d.row(i));
            assert_eq!(a.label(i), d.label(i));
        }
        assert_ne!(a.row(5), d.row(5));
    }

    #[test]
    fn raw_replacement_clears_normalized_flag() {
        let d = data();
        let req = UnlearningRequest::new([0, 1], 3).unwrap();
        assert!(!apply_request(&d, &req, false).unwrap().is_normalized());
    }

    #[test]
    fn validation() {
        assert!(UnlearningRequest::new([1, 1], 0).is_err());
        let req = UnlearningRequest::new([3, 1], 0).unwrap();
        assert_eq!(req.indices(), &[1, 3]);
        let far = UnlearningRequest::new([10], 0).unwrap();
        assert!(apply_request(&data(), &far, true).is_err());
        let r = UnlearningRequest::random(10, 4, 2).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r, UnlearningRequest::random(10, 4, 2).unwrap());
    }
}
