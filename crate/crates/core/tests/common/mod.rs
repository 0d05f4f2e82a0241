//! Independent reference computations used as test oracles.
#![allow(dead_code)]

pub mod checks;
pub mod oracles;

use chambrier::exact_geometry::{q, qf, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashSet, VecDeque};

/// Seeded generator; `CHAMBRIER_SEED` overrides the default seed.
pub fn rng(salt: u64) -> ChaCha8Rng {
    let seed = std::env::var("CHAMBRIER_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(20240611);
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn rand_q(r: &mut ChaCha8Rng, span: i64, den: i64) -> Q {
    qf(r.gen_range(-span * den..=span * den), den)
}

pub fn rand_vec(r: &mut ChaCha8Rng, n: usize, span: i64, den: i64) -> Vec<Q> {
    (0..n).map(|_| rand_q(r, span, den)).collect()
}

/// Roots in simple-root coordinates, closed under `s_i(b) = b - <b, a_i^vee> a_i`
/// with `<a_j, a_i^vee> = cartan[i][j]`.
pub fn roots_by_cartan(cartan: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let n = cartan.len();
    let mut roots: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        roots.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(b) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| b[j] * cartan[i][j]).sum();
            let mut img = b.clone();
            img[i] -= pairing;
            if roots.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    roots
}

/// Order of the Weyl group, computed as the closure of simple reflections acting as
/// permutations of the root set.
pub fn weyl_order_by_permutations(cartan: &[Vec<i64>]) -> usize {
    let roots: Vec<Vec<i64>> = roots_by_cartan(cartan).into_iter().collect();
    let n = cartan.len();
    let idx = |v: &Vec<i64>| roots.iter().position(|r| r == v).unwrap();
    let gens: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            roots
                .iter()
                .map(|b| {
                    let pairing: i64 = (0..n).map(|j| b[j] * cartan[i][j]).sum();
                    let mut img = b.clone();
                    img[i] -= pairing;
                    idx(&img)
                })
                .collect()
        })
        .collect();
    let id: Vec<usize> = (0..roots.len()).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let c: Vec<usize> = p.iter().map(|&k| g[k]).collect();
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    seen.len()
}

/// Faces of a central arrangement of `m` distinct lines in the plane.
pub fn planar_face_count(m: usize) -> usize {
    4 * m + 1
}

pub fn qv(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}
