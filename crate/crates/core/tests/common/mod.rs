#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmc_core::{
    AnyMatroid, ExplicitMatroid, GraphicMatroid, Matroid, MetricInstance, PartitionMatroid,
    TransversalMatroid, UniformMatroid,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer shortest-path metric of a random connected graph.
pub fn integer_metric(rng: &mut ChaCha8Rng, n: usize, max_edge: u32) -> Vec<Vec<f64>> {
    let inf = f64::INFINITY;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let a = order[i];
        let b = order[rng.gen_range(0..i)];
        let w = rng.gen_range(1..=max_edge) as f64;
        d[a][b] = d[a][b].min(w);
        d[b][a] = d[a][b];
    }
    for _ in 0..n {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            let w = rng.gen_range(1..=max_edge) as f64;
            d[a][b] = d[a][b].min(w);
            d[b][a] = d[a][b];
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

pub fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> MetricInstance {
    let d = integer_metric(rng, n, 9);
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=4) as f64).collect();
    let total: f64 = weights.iter().sum();
    let m = if total > 0.0 { rng.gen_range(1..=total as u32) as f64 } else { 0.0 };
    MetricInstance::from_matrix(d, weights, m).unwrap()
}

/// Random matroid of the given class on `n` elements with rank at most `max_rank`.
pub fn random_matroid(rng: &mut ChaCha8Rng, kind: usize, n: usize, max_rank: usize) -> AnyMatroid {
    match kind % 4 {
        0 => AnyMatroid::Uniform(UniformMatroid::new(n, rng.gen_range(1..=max_rank))),
        1 => {
            let classes = rng.gen_range(1..=3);
            let class_of = (0..n).map(|_| rng.gen_range(0..classes)).collect();
            let mut capacity = vec![0; classes];
            let mut budget = rng.gen_range(1..=max_rank);
            while budget > 0 {
                capacity[rng.gen_range(0..classes)] += 1;
                budget -= 1;
            }
            AnyMatroid::Partition(PartitionMatroid::new(class_of, capacity).unwrap())
        }
        2 => {
            let vertices = rng.gen_range(2..=max_rank + 1);
            let edges = (0..n)
                .map(|_| (rng.gen_range(0..vertices), rng.gen_range(0..vertices)))
                .collect();
            AnyMatroid::Graphic(GraphicMatroid::new(vertices, edges).unwrap())
        }
        _ => {
            let k = rng.gen_range(1..=max_rank);
            let family = (0..k)
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.4)).collect())
                .collect();
            AnyMatroid::Transversal(TransversalMatroid::new(n, family).unwrap())
        }
    }
}

/// Explicit copy of a random concrete matroid with shuffled element labels.
pub fn random_explicit(rng: &mut ChaCha8Rng, n: usize) -> ExplicitMatroid {
    let kind = rng.gen_range(0..4);
    let max_rank = rng.gen_range(1..=n.max(1));
    let inner = random_matroid(rng, kind, n, max_rank);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    ExplicitMatroid::from_predicate(n, |s| {
        let mapped: Vec<usize> = s.iter().map(|&e| perm[e]).collect();
        inner.independent(&mapped)
    })
    .unwrap()
}

pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0usize..1 << n).map(move |mask| (0..n).filter(|&e| mask & (1 << e) != 0).collect())
}
