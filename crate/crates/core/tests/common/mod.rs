#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use setfn_core::{GroundSet, Rational, SetFunction};

pub fn ground(m: u32) -> GroundSet {
    GroundSet::new(m).unwrap()
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.random_range(-4..=4), rng.random_range(1..=3))
}

/// Cut + concave-of-cardinality + modular: submodular by construction,
/// vanishing on the empty set.
fn submodular_table(m: u32, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let edges: Vec<(u32, u32, i64)> =
        (1..=m).flat_map(|u| (u + 1..=m).map(move |v| (u, v))).map(|(u, v)| (u, v, rng.random_range(0..=3))).collect();
    // Concave profile: non-increasing increments.
    let mut increments: Vec<i64> = (0..m).map(|_| rng.random_range(-3..=6)).collect();
    increments.sort_unstable_by(|a, b| b.cmp(a));
    let concave: Vec<i64> = std::iter::once(0)
        .chain(increments.iter().scan(0, |acc, d| {
            *acc += d;
            Some(*acc)
        }))
        .collect();
    let modular: Vec<Rational> = (0..m).map(|_| small_rational(rng)).collect();

    ground(m)
        .subsets()
        .map(|a| {
            let cut: i64 = edges.iter().filter(|&&(u, v, _)| a.contains(u) != a.contains(v)).map(|e| e.2).sum();
            let linear: Rational = a.elements().map(|e| modular[e as usize - 1].clone()).sum();
            &Rational::from_integer(cut + concave[a.len() as usize]) + &linear
        })
        .collect()
}

/// Weighted coverage: monotone and submodular.
fn coverage_table(m: u32, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let items = 6;
    let item_weight: Vec<i64> = (0..items).map(|_| rng.random_range(1..=4)).collect();
    let covers: Vec<u32> = (0..m).map(|_| rng.random_range(0..1u32 << items)).collect();
    ground(m)
        .subsets()
        .map(|a| {
            let covered = a.elements().fold(0u32, |acc, e| acc | covers[e as usize - 1]);
            let w: i64 = (0..items).filter(|i| covered >> i & 1 == 1).map(|i| item_weight[i]).sum();
            Rational::from_integer(w)
        })
        .collect()
}

/// Seeded dense tables on `m` elements cycling through four flavours:
/// unstructured, submodular, perturbed submodular, and monotone coverage.
/// Every table vanishes on the empty set.
pub fn random_tables(m: u32, count: usize, seed: u64) -> Vec<SetFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 1usize << m;
    (0..count)
        .map(|i| {
            let mut values = match i % 4 {
                0 => (0..n).map(|_| small_rational(&mut rng)).collect(),
                1 => submodular_table(m, &mut rng),
                2 => {
                    let mut t = submodular_table(m, &mut rng);
                    let at = rng.random_range(1..n);
                    t[at] = &t[at] + &Rational::new(rng.random_range(-2..=2), 2);
                    t
                }
                _ => coverage_table(m, &mut rng),
            };
            values[0] = Rational::ZERO;
            SetFunction::table(ground(m), values).unwrap()
        })
        .collect()
}

/// Every built-in family on `m` elements, including composites.
pub fn builtin_family(m: u32, seed: u64) -> Vec<SetFunction> {
    let g = ground(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ m as u64);
    let mut out = vec![SetFunction::cardinality(g)];
    for cap in 0..=m {
        out.push(SetFunction::truncation(g, cap));
    }
    for y in g.subsets().filter(|y| !y.is_empty()) {
        out.push(SetFunction::iou(y).unwrap());
        out.push(SetFunction::neg_iou(y).unwrap());
    }
    out.extend(known_submodular(m, &mut rng));
    out.push(SetFunction::negated(SetFunction::cardinality(g)));
    out.push(SetFunction::scaled(SetFunction::truncation(g, 1), Rational::new(-3, 2)));
    out.push(SetFunction::scaled(SetFunction::iou(g.full()).unwrap(), Rational::new(5, 7)));
    out
}

/// Random coverage and graph-cut instances.
pub fn known_submodular(m: u32, rng: &mut ChaCha8Rng) -> Vec<SetFunction> {
    let g = ground(m);
    let covers: Vec<Vec<u32>> = (0..m).map(|_| (1..=8).filter(|_| rng.random_bool(0.35)).collect()).collect();
    let edges: Vec<(u32, u32)> =
        (1..=m).flat_map(|u| (u + 1..=m).map(move |v| (u, v))).filter(|_| rng.random_bool(0.5)).collect();
    vec![SetFunction::coverage(g, covers).unwrap(), SetFunction::graph_cut(g, edges).unwrap()]
}
