use rand::seq::index;
use rand::Rng;

use super::Habitat;
use crate::pareto::euclidean;

const MAX_ROUNDS: usize = 100;

/// k-means partition of habitats in decision space.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Cluster index per habitat.
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Mean efficiency score per cluster; `NaN` for an empty cluster.
    pub mean_efficiency: Vec<f64>,
    /// Cluster with the highest mean efficiency, lowest index on ties.
    pub goal_cluster: usize,
}

impl Clustering {
    pub fn num_clusters(&self) -> usize {
        self.centroids.len()
    }

    pub fn members(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignments
            .iter()
            .enumerate()
            .filter(move |(_, c)| **c == cluster)
            .map(|(i, _)| i)
    }
}

/// Lloyd's k-means with `min(k, n)` clusters seeded from distinct habitats
/// chosen uniformly at random. Unevaluated habitats count as efficiency 0.
pub fn cluster_habitats<R: Rng + ?Sized>(habitats: &[Habitat], k: usize, rng: &mut R) -> Clustering {
    let n = habitats.len();
    let k = k.clamp(1, n.max(1));
    let mut centroids: Vec<Vec<f64>> = index::sample(rng, n, k)
        .into_iter()
        .map(|i| habitats[i].x.clone())
        .collect();
    let mut assignments = vec![usize::MAX; n];

    for _ in 0..MAX_ROUNDS {
        let mut changed = false;
        for (h, a) in habitats.iter().zip(assignments.iter_mut()) {
            let nearest = nearest_centroid(&h.x, &centroids);
            if *a != nearest {
                *a = nearest;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let dim = habitats[0].x.len();
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (h, &a) in habitats.iter().zip(&assignments) {
            counts[a] += 1;
            for (s, v) in sums[a].iter_mut().zip(&h.x) {
                *s += v;
            }
        }
        for c in 0..k {
            // An emptied cluster keeps its previous centroid.
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
    }

    let mut totals = vec![0.0; k];
    let mut counts = vec![0usize; k];
    for (h, &a) in habitats.iter().zip(&assignments) {
        totals[a] += h.score();
        counts[a] += 1;
    }
    let mean_efficiency: Vec<f64> = totals
        .iter()
        .zip(&counts)
        .map(|(t, &c)| if c == 0 { f64::NAN } else { t / c as f64 })
        .collect();
    let mut goal_cluster = 0;
    for (c, &m) in mean_efficiency.iter().enumerate() {
        let best = mean_efficiency[goal_cluster];
        if !m.is_nan() && (best.is_nan() || m > best) {
            goal_cluster = c;
        }
    }
    Clustering {
        assignments,
        centroids,
        mean_efficiency,
        goal_cluster,
    }
}

fn nearest_centroid(x: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = euclidean(x, centroid);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coa::Efficiency;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hab(x: [f64; 2], score: f64) -> Habitat {
        Habitat {
            x: x.to_vec(),
            objectives: vec![0.0, 0.0],
            efficiency: Some(Efficiency {
                score,
                efficient: score == 1.0,
            }),
        }
    }

    #[test]
    fn separated_pairs_split() {
        let hs = vec![
            hab([0.0, 0.0], 1.0),
            hab([10.0, 10.0], 0.2),
            hab([0.1, 0.0], 0.8),
            hab([10.1, 10.0], 0.4),
        ];
        for seed in 0..20 {
            let c = cluster_habitats(&hs, 2, &mut ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(c.assignments[0], c.assignments[2]);
            assert_eq!(c.assignments[1], c.assignments[3]);
            assert_ne!(c.assignments[0], c.assignments[1]);
            assert_eq!(c.goal_cluster, c.assignments[0]);
            assert!((c.mean_efficiency[c.goal_cluster] - 0.9).abs() < 1e-12);
        }
    }

    #[test]
    fn single_cluster() {
        let hs = vec![hab([0.0, 0.0], 1.0), hab([5.0, 1.0], 0.3), hab([2.0, 9.0], 0.5)];
        let c = cluster_habitats(&hs, 1, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(c.assignments, vec![0, 0, 0]);
        assert_eq!(c.goal_cluster, 0);
    }

    #[test]
    fn more_clusters_than_habitats() {
        let hs = vec![hab([0.0, 0.0], 0.5), hab([5.0, 1.0], 1.0)];
        let c = cluster_habitats(&hs, 5, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(c.num_clusters(), 2);
        assert_ne!(c.assignments[0], c.assignments[1]);
        assert_eq!(c.goal_cluster, c.assignments[1]);
    }

    #[test]
    fn assignments_are_nearest_at_convergence() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let hs: Vec<Habitat> = (0..40)
            .map(|_| hab([rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)], rng.gen()))
            .collect();
        let c = cluster_habitats(&hs, 3, &mut rng);
        for (h, &a) in hs.iter().zip(&c.assignments) {
            let own = euclidean(&h.x, &c.centroids[a]);
            for centroid in &c.centroids {
                assert!(own <= euclidean(&h.x, centroid) + 1e-12);
            }
        }
    }
}
