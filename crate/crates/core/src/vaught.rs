//! Vaught transforms for partial actions of finite discrete groups.
//!
//! For `x ∈ X` and `V ⊆ G` write `V^x = V ∩ G^x`. The transforms collect the
//! points for which `{g ∈ V^x : g·x ∈ A}` is non-meager (`Δ`) or comeager (`*`)
//! in `V^x`. Category is always decided by the topology oracle on the
//! discrete group, even though discreteness makes it trivial.

use crate::error::{Error, Result};
use crate::paction::PartialAction;
use crate::report::Check;
use crate::subset::Subset;
use crate::topology::FinTop;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Delta,
    Star,
}

/// `{g ∈ V^x : g·x ∈ A}` together with `V^x`.
fn witnesses(pa: &PartialAction, a: Subset, v: Subset, x: usize) -> (Subset, Subset) {
    let vx = v & pa.g_upper(x);
    let hits = vx
        .iter()
        .filter(|&g| pa.apply(g, x).is_some_and(|y| a.contains(y)))
        .collect();
    (hits, vx)
}

fn check_v(pa: &PartialAction, v: Subset) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidOpenSet);
    }
    if !v.is_subset_of(pa.group().all()) {
        return Err(Error::InvalidSubset {
            set: v,
            size: pa.group().order(),
            reason: "not a set of group elements",
        });
    }
    Ok(())
}

fn check_a(pa: &PartialAction, a: Subset) -> Result<()> {
    if a.is_subset_of(pa.space().full()) {
        Ok(())
    } else {
        Err(Error::InvalidSubset {
            set: a,
            size: pa.size(),
            reason: "not a set of points",
        })
    }
}

/// `A^{ΔV}`.
pub fn delta_transform(pa: &PartialAction, a: Subset, v: Subset) -> Result<Subset> {
    check_v(pa, v)?;
    check_a(pa, a)?;
    let group_top = FinTop::discrete(pa.group().order());
    let mut out = Subset::EMPTY;
    for x in 0..pa.size() {
        let (hits, vx) = witnesses(pa, a, v, x);
        if !group_top.is_meager_in(hits, vx)? {
            out.insert(x);
        }
    }
    Ok(out)
}

/// `A^{*V}`. Holds vacuously where `V^x` is empty.
pub fn star_transform(pa: &PartialAction, a: Subset, v: Subset) -> Result<Subset> {
    check_v(pa, v)?;
    check_a(pa, a)?;
    let group_top = FinTop::discrete(pa.group().order());
    let mut out = Subset::EMPTY;
    for x in 0..pa.size() {
        let (hits, vx) = witnesses(pa, a, v, x);
        if group_top.is_comeager_in(hits, vx)? {
            out.insert(x);
        }
    }
    Ok(out)
}

pub fn transform(pa: &PartialAction, kind: Kind, a: Subset, v: Subset) -> Result<Subset> {
    match kind {
        Kind::Delta => delta_transform(pa, a, v),
        Kind::Star => star_transform(pa, a, v),
    }
}

/// Every way of splitting `set` into three labelled (possibly empty) parts.
fn three_partitions(set: Subset) -> impl Iterator<Item = [Subset; 3]> {
    let points = set.to_vec();
    let total = 3usize.pow(points.len() as u32);
    (0..total).map(move |mut code| {
        let mut parts = [Subset::EMPTY; 3];
        for &p in &points {
            parts[code % 3].insert(p);
            code /= 3;
        }
        parts
    })
}

/// Largest `|G| + |X|` for which [`check_transform_identities`] runs at all.
pub const MAX_EXHAUSTIVE_BITS: usize = 14;
/// Largest `|G| + |X|` for which three-way splits are also enumerated.
pub const MAX_SPLIT_BITS: usize = 10;

/// Exhaustive check of the four transform identities: complement duality,
/// Δ over unions, `*` over intersections, and Δ as a union of `*` over the
/// (finite, discrete) basis of nonempty subsets of `V`.
pub fn check_transform_identities(pa: &PartialAction) -> Check {
    const NAME: &str = "Vaught transform identities";
    let full = pa.space().full();
    let n = pa.size();
    let scale = pa.group().order() + n;
    if scale > MAX_EXHAUSTIVE_BITS {
        return Check::not_applicable(NAME, format!("|G|+|X| = {scale} exceeds {MAX_EXHAUSTIVE_BITS}"));
    }
    let splits = scale <= MAX_SPLIT_BITS;
    let nonempty_v: Vec<Subset> = pa.group().all().subsets().filter(|v| !v.is_empty()).collect();
    let subsets: Vec<Subset> = full.subsets().collect();

    // precompute both transforms for every (A, V)
    let idx = |a: Subset| a.bits() as usize;
    let mut delta = vec![vec![Subset::EMPTY; subsets.len()]; nonempty_v.len()];
    let mut star = delta.clone();
    for (vi, &v) in nonempty_v.iter().enumerate() {
        for &a in &subsets {
            delta[vi][idx(a)] = delta_transform(pa, a, v).expect("valid arguments");
            star[vi][idx(a)] = star_transform(pa, a, v).expect("valid arguments");
        }
    }

    let duality = nonempty_v.iter().enumerate().find_map(|(vi, &v)| {
        subsets.iter().find_map(|&a| {
            let c = a.complement(n);
            let ok = delta[vi][idx(a)].complement(n) == star[vi][idx(c)]
                && star[vi][idx(a)].complement(n) == delta[vi][idx(c)];
            (!ok).then(|| format!("A={a}, V={v}"))
        })
    });

    let unions = nonempty_v.iter().enumerate().find_map(|(vi, &v)| {
        let d = &delta[vi];
        let pairs = subsets.iter().find_map(|&a1| {
            subsets
                .iter()
                .find(|&&a2| d[idx(a1 | a2)] != d[idx(a1)] | d[idx(a2)])
                .map(|&a2| format!("A1={a1}, A2={a2}, V={v}"))
        });
        pairs.or_else(|| {
            subsets.iter().filter(|_| splits).find_map(|&a| {
                three_partitions(a)
                    .find(|p| d[idx(a)] != p.iter().fold(Subset::EMPTY, |acc, &q| acc | d[idx(q)]))
                    .map(|p| format!("A={a} split {:?}, V={v}", p))
            })
        })
    });

    let intersections = nonempty_v.iter().enumerate().find_map(|(vi, &v)| {
        let s = &star[vi];
        let pairs = subsets.iter().find_map(|&a1| {
            subsets
                .iter()
                .find(|&&a2| s[idx(a1 & a2)] != s[idx(a1)] & s[idx(a2)])
                .map(|&a2| format!("A1={a1}, A2={a2}, V={v}"))
        });
        pairs.or_else(|| {
            // A = ⋂ (X ∖ B_i) for every 3-way split of X ∖ A
            subsets.iter().filter(|_| splits).find_map(|&a| {
                three_partitions(a.complement(n))
                    .find(|p| s[idx(a)] != p.iter().fold(full, |acc, &b| acc & s[idx(b.complement(n))]))
                    .map(|p| format!("A={a} complement split {:?}, V={v}", p))
            })
        })
    });

    // x can only be reached through U when U^x is nonempty
    let reach: Vec<Subset> = nonempty_v
        .iter()
        .map(|&u| (0..n).filter(|&x| !v_upper(pa, u, x).is_empty()).collect())
        .collect();
    let union_over = |vi: usize, a: Subset, restrict: bool| {
        let v = nonempty_v[vi];
        nonempty_v
            .iter()
            .enumerate()
            .filter(|(_, u)| u.is_subset_of(v))
            .fold(Subset::EMPTY, |acc, (ui, _)| {
                acc | if restrict {
                    star[ui][idx(a)] & reach[ui]
                } else {
                    star[ui][idx(a)]
                }
            })
    };
    let basis_witness = |restrict: bool| {
        nonempty_v.iter().enumerate().find_map(|(vi, &v)| {
            subsets.iter().find_map(|&a| {
                let rhs = union_over(vi, a, restrict);
                (rhs != delta[vi][idx(a)])
                    .then(|| format!("A={a}, V={v}: Δ={} union={rhs}", delta[vi][idx(a)]))
            })
        })
    };
    let basis = basis_witness(true);
    let literal = match basis_witness(false) {
        None => Check::info("(iv) unrestricted union", "agrees with Δ"),
        Some(w) => Check::info(
            "(iv) unrestricted union",
            format!("differs from Δ where some U^x is empty and * holds vacuously: {w}"),
        ),
    };

    Check::section(
        NAME,
        vec![
            Check::from_witness("(i) complement duality", duality),
            Check::from_witness("(ii) Δ commutes with unions", unions),
            Check::from_witness("(iii) * commutes with intersections", intersections),
            Check::from_witness("(iv) Δ = ⋃ * over basic U ⊆ V with U^x nonempty", basis)
                .with_detail("every subset is analytic at finite scale; checked for all A"),
            literal,
        ],
    )
}

/// Result of the open-set formula check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenCase {
    pub by_formula: Subset,
    pub by_transform: Subset,
    pub is_open: bool,
}

impl OpenCase {
    pub fn holds(&self) -> bool {
        self.by_formula == self.by_transform && self.is_open
    }
}

/// For open `A`: `A^{ΔV} = ⋃_{g∈V} {x ∈ X_{g⁻¹} : g·x ∈ A}`, and it is open.
pub fn open_case(pa: &PartialAction, a: Subset, v: Subset) -> Result<OpenCase> {
    check_a(pa, a)?;
    if !pa.space().is_open(a) {
        return Err(Error::NotOpen(a));
    }
    let g = pa.group();
    let by_formula = v.iter().fold(Subset::EMPTY, |acc, h| {
        acc | pa
            .domain(g.inv(h))
            .iter()
            .filter(|&x| pa.apply(h, x).is_some_and(|y| a.contains(y)))
            .collect()
    });
    let by_transform = delta_transform(pa, a, v)?;
    Ok(OpenCase {
        by_formula,
        by_transform,
        is_open: pa.space().is_open(by_formula),
    })
}

/// Runs [`open_case`] over every open `A` and nonempty `V`.
pub fn check_open_case(pa: &PartialAction) -> Check {
    const NAME: &str = "open A: union formula equals Δ and is open";
    if pa.group().order() > MAX_EXHAUSTIVE_BITS {
        return Check::not_applicable(NAME, format!("|G| exceeds {MAX_EXHAUSTIVE_BITS}"));
    }
    let witness = pa.space().opens().into_iter().find_map(|a| {
        pa.group()
            .all()
            .subsets()
            .filter(|v| !v.is_empty())
            .find_map(|v| match open_case(pa, a, v) {
                Ok(r) if r.holds() => None,
                Ok(r) => Some(format!(
                    "A={a}, V={v}: formula {} transform {} open={}",
                    r.by_formula, r.by_transform, r.is_open
                )),
                Err(e) => Some(e.to_string()),
            })
    });
    Check::from_witness(NAME, witness)
}

/// `S ∈ I_[x]` iff `{g ∈ G^x : g·x ∈ S}` is meager in `G^x`. The answer is
/// recomputed from every point of the class and must not depend on it.
pub fn ideal_member(pa: &PartialAction, x: usize, s: Subset) -> Result<bool> {
    let orbit = pa.orbit(x);
    if !s.is_subset_of(orbit) {
        return Err(Error::InvalidSubset {
            set: s,
            size: pa.size(),
            reason: "not contained in the orbit",
        });
    }
    let group_top = FinTop::discrete(pa.group().order());
    let member_from = |y: usize| -> Result<bool> {
        let gy = pa.g_upper(y);
        let hits: Subset = gy
            .iter()
            .filter(|&g| pa.apply(g, y).is_some_and(|z| s.contains(z)))
            .collect();
        group_top.is_meager_in(hits, gy)
    };
    let answer = member_from(x)?;
    for y in orbit {
        if member_from(y)? != answer {
            return Err(Error::AxiomViolation(format!(
                "ideal membership of {s} depends on the representative ({x} vs {y})"
            )));
        }
    }
    Ok(answer)
}

/// `A_I` for `A ⊆ X×X` (pair `(x, y)` at index `x * |X| + y`), computed from
/// the ideals and, independently, as `{x : (x,x) ∈ (X²∖A)^{*G}}` for the
/// square action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASubI {
    pub by_ideal: Subset,
    pub by_square_action: Subset,
}

impl ASubI {
    pub fn agree(&self) -> bool {
        self.by_ideal == self.by_square_action
    }
}

pub fn a_sub_i(pa: &PartialAction, a: Subset) -> Result<ASubI> {
    let n = pa.size();
    if !a.is_subset_of(Subset::full(n * n)) {
        return Err(Error::InvalidSubset {
            set: a,
            size: n * n,
            reason: "not a set of pairs",
        });
    }
    let mut by_ideal = Subset::EMPTY;
    for x in 0..n {
        let section: Subset = pa.orbit(x).iter().filter(|&y| a.contains(x * n + y)).collect();
        if ideal_member(pa, x, section)? {
            by_ideal.insert(x);
        }
    }
    let square = pa.beta_square()?;
    let star = star_transform(&square, a.complement(n * n), pa.group().all())?;
    let by_square_action = (0..n).filter(|&x| star.contains(x * n + x)).collect();
    Ok(ASubI {
        by_ideal,
        by_square_action,
    })
}

/// `C ∉ I_C` for every class, and the two computations of `A_I` agree for
/// every `A ⊆ X×X`.
pub fn check_idealistic(pa: &PartialAction) -> Check {
    let n = pa.size();
    let proper = (0..n).find_map(|x| match ideal_member(pa, x, pa.orbit(x)) {
        Ok(false) => None,
        Ok(true) => Some(format!("class of {x} lies in its own ideal")),
        Err(e) => Some(e.to_string()),
    });
    let sections = if n * n > 16 {
        None
    } else {
        Subset::full(n * n).subsets().find_map(|a| match a_sub_i(pa, a) {
            Ok(r) if r.agree() => None,
            Ok(r) => Some(format!(
                "A={a}: by ideal {} vs by square action {}",
                r.by_ideal, r.by_square_action
            )),
            Err(e) => Some(e.to_string()),
        })
    };
    let sections_check = if n * n > 16 {
        Check::not_applicable(
            "A_I by ideal = A_I by square action",
            "more than 2^16 subsets of X×X",
        )
    } else {
        Check::from_witness("A_I by ideal = A_I by square action", sections)
    };
    Check::section(
        "idealistic structure",
        vec![
            Check::from_witness("C ∉ I_C for every class", proper),
            sections_check,
        ],
    )
}

/// `V^x = V ∩ G^x`.
pub fn v_upper(pa: &PartialAction, v: Subset, x: usize) -> Subset {
    v & pa.g_upper(x)
}
