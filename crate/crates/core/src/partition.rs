use serde::{Deserialize, Serialize};

/// A set partition of `0..m`, kept in canonical form: every block sorted
/// ascending and blocks ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Canonicalises `blocks`. Returns `None` unless the blocks are
    /// non-empty, disjoint and cover `0..m` for some `m`.
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Option<Self> {
        let m: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; m];
        for block in &mut blocks {
            if block.is_empty() {
                return None;
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x >= m || seen[x] {
                    return None;
                }
                seen[x] = true;
            }
        }
        blocks.sort_by_key(|b| b[0]);
        Some(Self { blocks })
    }

    /// Level sets of a labelling `labels[x]`.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut by_label: std::collections::HashMap<usize, usize> = Default::default();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, &l) in labels.iter().enumerate() {
            let b = *by_label.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(x);
        }
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn point_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block index of every point.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.point_count()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                out[x] = b;
            }
        }
        out
    }

    /// True if every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        if self.point_count() != other.point_count() {
            return false;
        }
        let of = other.block_of();
        self.blocks.iter().all(|b| b.iter().all(|&x| of[x] == of[b[0]]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let p = Partition::new(vec![vec![3, 1], vec![2, 0]]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1, 3]]);
        assert!(Partition::new(vec![vec![0, 0]]).is_none());
        assert!(Partition::new(vec![vec![0], vec![]]).is_none());
    }

    #[test]
    fn refinement() {
        let fine = Partition::from_labels(&[0, 1, 2, 3]);
        let coarse = Partition::from_labels(&[0, 1, 0, 1]);
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
        assert!(coarse.refines(&coarse));
    }
}
