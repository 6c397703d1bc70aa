use alloc::vec::Vec;

use crate::features::SparseVector;
use crate::{Error, Result};

/// Training rows in compressed sparse row layout with `±1` targets.
#[derive(Debug, Clone)]
pub struct Dataset {
    indptr: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<f64>,
    targets: Vec<f64>,
    dimension: usize,
}

impl Dataset {
    pub fn new(vectors: &[SparseVector], labels: &[bool], dimension: usize) -> Result<Self> {
        Self::from_rows(vectors.iter().map(SparseVector::entries), labels, dimension)
    }

    /// Rows given as `(index, value)` slices with ascending, distinct indices.
    pub fn from_rows<'a, I>(rows: I, labels: &[bool], dimension: usize) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [(u32, f64)]>,
    {
        let mut indptr = alloc::vec![0];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for row in rows {
            for &(i, v) in row {
                if i as usize >= dimension {
                    return Err(Error::IndexOutOfBounds {
                        index: i as usize,
                        dimension,
                    });
                }
                if !v.is_finite() {
                    return Err(Error::NonFinite("feature value"));
                }
                indices.push(i);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        if indptr.len() - 1 != labels.len() {
            return Err(Error::param(
                "labels",
                alloc::format!("{} labels for {} vectors", labels.len(), indptr.len() - 1),
            ));
        }
        Ok(Dataset {
            indptr,
            indices,
            values,
            targets: labels.iter().map(|&l| if l { 1.0 } else { -1.0 }).collect(),
            dimension,
        })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn target(&self, i: usize) -> f64 {
        self.targets[i]
    }

    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let range = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[range.clone()], &self.values[range])
    }

    pub fn dot(&self, i: usize, w: &[f64]) -> f64 {
        let (idx, val) = self.row(i);
        idx.iter().zip(val).map(|(&j, &v)| w[j as usize] * v).sum()
    }

    /// `w += alpha * x_i`
    pub fn axpy(&self, i: usize, alpha: f64, w: &mut [f64]) {
        let (idx, val) = self.row(i);
        for (&j, &v) in idx.iter().zip(val) {
            w[j as usize] += alpha * v;
        }
    }

    pub fn squared_norm(&self, i: usize) -> f64 {
        self.row(i).1.iter().map(|v| v * v).sum()
    }

    pub(crate) fn ensure_trainable(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::param("dimension", "feature space is empty"));
        }
        if !self.targets.iter().any(|&y| y > 0.0) {
            return Err(Error::MissingClass("relevant"));
        }
        if !self.targets.iter().any(|&y| y < 0.0) {
            return Err(Error::MissingClass("not_relevant"));
        }
        Ok(())
    }
}
