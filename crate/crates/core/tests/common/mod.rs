//! Instance families and brute-force oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use paglob::{FinTop, FiniteGroup, PartialAction, Subset, TotalAction};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn set(xs: &[usize]) -> Subset {
    xs.iter().collect()
}

/// Every topology on `n` points, enumerated as reflexive transitive
/// neighbourhood assignments.
pub fn topologies(n: usize) -> Vec<FinTop> {
    let mut out = Vec::new();
    let mut nbhd = vec![Subset::EMPTY; n];
    fn go(x: usize, n: usize, nbhd: &mut Vec<Subset>, out: &mut Vec<FinTop>) {
        if x == n {
            let transitive = (0..n).all(|a| nbhd[a].iter().all(|b| nbhd[b].is_subset_of(nbhd[a])));
            if transitive {
                out.push(FinTop::from_neighbourhoods(nbhd.clone()).unwrap());
            }
            return;
        }
        for s in Subset::full(n).subsets().filter(|s| s.contains(x)) {
            nbhd[x] = s;
            go(x + 1, n, nbhd, out);
        }
    }
    go(0, n, &mut nbhd, &mut out);
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// `σ` preserves minimal neighbourhoods, hence the topology.
pub fn is_homeomorphism(t: &FinTop, sigma: &[usize]) -> bool {
    (0..t.size()).all(|x| t.nbhd(x).map(|y| sigma[y]) == t.nbhd(sigma[x]))
}

/// All continuous actions of `ℤ_k` on `t`: homeomorphisms with `σ^k = id`.
pub fn cyclic_actions(t: &FinTop, k: usize) -> Vec<TotalAction> {
    let n = t.size();
    permutations(n)
        .into_iter()
        .filter(|s| is_homeomorphism(t, s))
        .filter_map(|s| {
            let mut table = vec![(0..n).collect::<Vec<_>>()];
            for g in 1..k {
                let prev: &Vec<usize> = &table[g - 1];
                table.push(prev.iter().map(|&x| s[x]).collect());
            }
            let closes = table[k - 1].iter().enumerate().all(|(x, &y)| s[y] == x);
            closes.then(|| TotalAction::new(FiniteGroup::cyclic(k).unwrap(), t.clone(), table).unwrap())
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub pa: PartialAction,
}

/// Total cyclic actions of order at most `max_k` on all topologies with at
/// most `max_n` points, and their restrictions to every nonempty subset.
pub fn family(max_k: usize, max_n: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for (ti, t) in topologies(n).iter().enumerate() {
            for k in 1..=max_k {
                for (ai, act) in cyclic_actions(t, k).iter().enumerate() {
                    for y in Subset::full(n).subsets().filter(|y| !y.is_empty()) {
                        out.push(Instance {
                            name: format!("Z{k} on top#{ti}/{n} action#{ai} restricted to {y}"),
                            pa: act.induced(y).unwrap(),
                        });
                    }
                }
            }
        }
    }
    out
}

pub enum Mutation {
    Value { g: usize, x: usize, to: usize },
    Domain { g: usize, x: usize },
}

/// One random mutation of `pa`: either a changed map value or a toggled
/// domain point. Returns `None` when `pa` has no room for the chosen kind.
pub fn mutate(pa: &PartialAction, rng: &mut StdRng) -> Option<(Mutation, PartialAction)> {
    let k = pa.group().order();
    let n = pa.size();
    if rng.gen_bool(0.5) {
        let candidates: Vec<(usize, usize)> = (0..k)
            .flat_map(|g| (0..n).filter_map(move |x| pa.apply(g, x).map(|_| (g, x))))
            .collect();
        if candidates.is_empty() || n < 2 {
            return None;
        }
        let (g, x) = candidates[rng.gen_range(0..candidates.len())];
        let old = pa.apply(g, x).unwrap();
        let mut to = rng.gen_range(0..n - 1);
        if to >= old {
            to += 1;
        }
        Some((Mutation::Value { g, x, to }, pa.with_entry(g, x, Some(to))))
    } else {
        let g = rng.gen_range(0..k);
        let x = rng.gen_range(0..n);
        let mut d = pa.domain(g);
        if d.contains(x) {
            d.remove(x);
        } else {
            d.insert(x);
        }
        Some((Mutation::Domain { g, x }, pa.with_domain(g, d)))
    }
}

pub fn mutations(base: &[Instance], count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let src = &base[rng.gen_range(0..base.len())];
        if let Some((m, pa)) = mutate(&src.pa, &mut rng) {
            let what = match m {
                Mutation::Value { g, x, to } => format!("m_{g}({x}) := {to}"),
                Mutation::Domain { g, x } => format!("toggle {x} in X_{g}"),
            };
            out.push(Instance {
                name: format!("{} with {what}", src.name),
                pa,
            });
        }
    }
    out
}

/// The relation on `G×X` read off its definition: `(g,x) ~ (h,y)` iff
/// `x ∈ X_{g⁻¹h}` and `m_{h⁻¹g}(x) = y`. Indexed by `g*n+x`.
pub fn brute_r(pa: &PartialAction) -> Vec<Vec<bool>> {
    let grp = pa.group();
    let n = pa.size();
    let m = grp.order() * n;
    let mut r = vec![vec![false; m]; m];
    for p in 0..m {
        for q in 0..m {
            let (g, x, h, y) = (p / n, p % n, q / n, q % n);
            let in_dom = pa.domain(grp.mul(grp.inv(g), h)).contains(x);
            r[p][q] = in_dom && pa.apply(grp.mul(grp.inv(h), g), x) == Some(y);
        }
    }
    r
}

/// Orbit relation of `(h,x) ↦ (h g⁻¹, g·x)` by closure of the one-step graph.
pub fn hat_orbits(pa: &PartialAction) -> Vec<Vec<bool>> {
    let grp = pa.group();
    let n = pa.size();
    let m = grp.order() * n;
    let mut r = vec![vec![false; m]; m];
    for p in 0..m {
        r[p][p] = true;
        let (h, x) = (p / n, p % n);
        for g in grp.elements() {
            if let Some(y) = pa.apply(g, x) {
                r[p][grp.mul(h, grp.inv(g)) * n + y] = true;
            }
        }
    }
    // Warshall
    for k in 0..m {
        for i in 0..m {
            if r[i][k] {
                for j in 0..m {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// `A` is meager in `S` iff it is a finite union of nowhere dense subsets of
/// the subspace `S`; checked literally from the open sets.
pub fn meager_by_definition(t: &FinTop, a: Subset, s: Subset) -> bool {
    let opens = t.opens();
    let sub_opens: Vec<Subset> = opens.iter().map(|&u| u & s).collect();
    // closure in S of B is S minus the union of S-open sets disjoint from B
    let nowhere_dense = |b: Subset| {
        let closure = s - sub_opens
            .iter()
            .filter(|u| u.is_disjoint(b))
            .fold(Subset::EMPTY, |acc, &u| acc | u);
        // interior in S of the closure is empty
        !sub_opens
            .iter()
            .any(|&u| !u.is_empty() && u.is_subset_of(closure))
    };
    // the union of all nowhere dense subsets of A is the largest candidate
    let cover = a
        .subsets()
        .filter(|&b| nowhere_dense(b))
        .fold(Subset::EMPTY, |acc, b| acc | b);
    cover == a
}
