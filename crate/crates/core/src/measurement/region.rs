use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of outcome labels. One-dimensional outcome spaces use one axis
/// (grid cells, momentum bins, projector indices); phase-space outcomes use
/// a rectangle of two axes. A periodic region wraps when translated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    axes: Vec<BTreeSet<i64>>,
    pub periodic: bool,
}

impl Region {
    pub fn cells<I: IntoIterator<Item = i64>>(labels: I) -> Self {
        Region {
            axes: vec![labels.into_iter().collect()],
            periodic: false,
        }
    }

    /// Half-open interval `[lo, hi)`.
    pub fn interval(lo: i64, hi: i64) -> Self {
        Self::cells(lo..hi)
    }

    pub fn single(label: i64) -> Self {
        Self::cells([label])
    }

    /// Product `x × p` of two one-axis regions.
    pub fn rect(x: &Region, p: &Region) -> Self {
        assert!(x.rank() == 1 && p.rank() == 1, "rectangle sides must be one-axis regions");
        Region {
            axes: vec![x.axes[0].clone(), p.axes[0].clone()],
            periodic: x.periodic && p.periodic,
        }
    }

    pub fn with_periodic(mut self, periodic: bool) -> Self {
        self.periodic = periodic;
        self
    }

    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, i: usize) -> &BTreeSet<i64> {
        &self.axes[i]
    }

    pub fn is_empty(&self) -> bool {
        self.axes.iter().any(|a| a.is_empty())
    }

    /// Number of elementary outcomes.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.len()).product()
    }

    pub fn contains(&self, label: &[i64]) -> bool {
        label.len() == self.rank() && self.axes.iter().zip(label).all(|(a, l)| a.contains(l))
    }

    /// All elementary outcomes, row-major over the axes.
    pub fn labels(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = vec![Vec::new()];
        for axis in &self.axes {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    axis.iter().map(move |&l| {
                        let mut v = prefix.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Translate axis by axis; labels leaving `ranges` (half-open) wrap for
    /// periodic regions and raise a region overflow otherwise.
    pub fn shifted(&self, shifts: &[i64], ranges: &[(i64, i64)]) -> Result<Region> {
        if shifts.len() != self.rank() || ranges.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: shifts.len(),
            });
        }
        let mut axes = Vec::with_capacity(self.rank());
        for ((axis, &s), &(lo, hi)) in self.axes.iter().zip(shifts).zip(ranges) {
            let mut moved = BTreeSet::new();
            for &l in axis {
                let mut k = l + s;
                if k < lo || k >= hi {
                    if !self.periodic {
                        return Err(Error::RegionOverflow(format!(
                            "label {l} shifted by {s} leaves [{lo}, {hi})"
                        )));
                    }
                    k = lo + (k - lo).rem_euclid(hi - lo);
                }
                moved.insert(k);
            }
            axes.push(moved);
        }
        Ok(Region {
            axes,
            periodic: self.periodic,
        })
    }

    /// Intersection of two one-axis regions.
    pub fn intersection(&self, other: &Region) -> Region {
        assert!(self.rank() == other.rank(), "rank mismatch");
        Region {
            axes: self
                .axes
                .iter()
                .zip(&other.axes)
                .map(|(a, b)| a.intersection(b).copied().collect())
                .collect(),
            periodic: self.periodic && other.periodic,
        }
    }

    /// Union of two one-axis regions.
    pub fn union(&self, other: &Region) -> Region {
        assert!(self.rank() == 1 && other.rank() == 1, "union is defined for one-axis regions");
        Region {
            axes: vec![self.axes[0].union(&other.axes[0]).copied().collect()],
            periodic: self.periodic && other.periodic,
        }
    }

    pub(crate) fn check_within(&self, ranges: &[(i64, i64)]) -> Result<()> {
        if ranges.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: ranges.len(),
                got: self.rank(),
            });
        }
        for (axis, &(lo, hi)) in self.axes.iter().zip(ranges) {
            if let Some(&l) = axis.iter().find(|&&l| l < lo || l >= hi) {
                return Err(Error::RegionOverflow(format!("label {l} outside [{lo}, {hi})")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifting_wraps_only_when_periodic() {
        let r = Region::interval(6, 8);
        assert!(matches!(r.shifted(&[3], &[(0, 8)]), Err(Error::RegionOverflow(_))));
        let moved = r.clone().with_periodic(true).shifted(&[3], &[(0, 8)]).unwrap();
        assert_eq!(moved, Region::cells([1, 2]).with_periodic(true));
    }

    #[test]
    fn rectangle_labels() {
        let r = Region::rect(&Region::interval(0, 2), &Region::cells([-1, 1]));
        assert_eq!(r.len(), 4);
        assert!(r.contains(&[1, -1]));
        assert_eq!(r.labels()[0], vec![0, -1]);
    }
}
