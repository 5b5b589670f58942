use crate::set::WorldSet;

use super::{Frame, KripkeError};

/// Clusters of a transitive frame, ordered by their least world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterDecomposition {
    clusters: Vec<WorldSet>,
    cluster_of: Vec<usize>,
    degenerate: Vec<bool>,
    /// `sees[c]`: clusters `d != c` with `c R d`.
    sees: Vec<Vec<usize>>,
    rank: Vec<usize>,
}

impl ClusterDecomposition {
    pub fn new(frame: &Frame) -> Result<ClusterDecomposition, KripkeError> {
        frame.require_transitive("cluster decomposition")?;
        let n = frame.len();
        let mut cluster_of = vec![usize::MAX; n];
        let mut clusters = Vec::new();
        for x in 0..n {
            if cluster_of[x] != usize::MAX {
                continue;
            }
            let mut c = WorldSet::singleton(n, x);
            for y in frame.succ(x).iter() {
                if frame.related(y, x) {
                    c.insert(y);
                }
            }
            for y in c.iter() {
                cluster_of[y] = clusters.len();
            }
            clusters.push(c);
        }
        let degenerate = clusters
            .iter()
            .map(|c| {
                let x = c.first().expect("clusters are non-empty");
                c.len() == 1 && !frame.related(x, x)
            })
            .collect();
        let sees: Vec<Vec<usize>> = clusters
            .iter()
            .enumerate()
            .map(|(ci, c)| {
                let x = c.first().expect("clusters are non-empty");
                let mut out: Vec<usize> = frame
                    .succ(x)
                    .iter()
                    .map(|y| cluster_of[y])
                    .filter(|&d| d != ci)
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect();
        let mut rank = vec![0; clusters.len()];
        fn rank_of(c: usize, sees: &[Vec<usize>], rank: &mut [usize]) -> usize {
            if rank[c] == 0 {
                let below = sees[c]
                    .iter()
                    .map(|&d| rank_of(d, sees, rank))
                    .max()
                    .unwrap_or(0);
                rank[c] = below + 1;
            }
            rank[c]
        }
        for c in 0..clusters.len() {
            rank_of(c, &sees, &mut rank);
        }
        Ok(ClusterDecomposition {
            clusters,
            cluster_of,
            degenerate,
            sees,
            rank,
        })
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn clusters(&self) -> &[WorldSet] {
        &self.clusters
    }

    pub fn cluster(&self, c: usize) -> &WorldSet {
        &self.clusters[c]
    }

    /// Index of `C_x`.
    pub fn cluster_of(&self, x: usize) -> usize {
        self.cluster_of[x]
    }

    pub fn is_degenerate(&self, c: usize) -> bool {
        self.degenerate[c]
    }

    pub fn rank(&self, c: usize) -> usize {
        self.rank[c]
    }

    /// Clusters strictly above `c` in the cluster order.
    pub fn strictly_sees(&self, c: usize) -> &[usize] {
        &self.sees[c]
    }

    /// Rank-1 clusters.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.rank[c] == 1).collect()
    }

    /// `M(x)`: maximal clusters contained in `R(x)`.
    pub fn maximal_seen_from(&self, frame: &Frame, x: usize) -> Vec<usize> {
        self.maximal()
            .into_iter()
            .filter(|&c| self.clusters[c].is_subset(frame.succ(x)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_examples() {
        let d = Frame::from_pairs(1, []).clusters().unwrap();
        assert_eq!(d.len(), 1);
        assert!(d.is_degenerate(0));
        assert_eq!(d.rank(0), 1);

        let d = Frame::from_pairs(2, [(0, 0), (0, 1), (1, 0), (1, 1)])
            .clusters()
            .unwrap();
        assert_eq!(d.len(), 1);
        assert!(!d.is_degenerate(0));
        assert_eq!(d.cluster(0).len(), 2);

        let d = Frame::from_pairs(3, [(0, 1), (1, 2), (0, 2)])
            .clusters()
            .unwrap();
        assert_eq!(d.len(), 3);
        assert!((0..3).all(|c| d.is_degenerate(c)));
        assert_eq!((d.rank(0), d.rank(1), d.rank(2)), (3, 2, 1));
        assert_eq!(d.maximal(), vec![2]);
    }

    #[test]
    fn rejects_non_transitive() {
        assert!(matches!(
            Frame::from_pairs(3, [(0, 1), (1, 2)]).clusters(),
            Err(KripkeError::NotTransitive { .. })
        ));
    }
}
