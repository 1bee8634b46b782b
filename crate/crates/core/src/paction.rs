//! Partial actions of finite groups on finite spaces.
//!
//! A partial action is a family of bijections `m_g : X_{g⁻¹} → X_g`. The
//! domain table is indexed by the target side (`dom[g] = X_g`) and `map[g]`
//! is defined on `X_{g⁻¹}`, so `map[g][x]` is `g·x` whenever it exists.

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::relation::EqRel;
use crate::report::Check;
use crate::subset::Subset;
use crate::topology::{is_continuous, is_homeomorphism, is_open_map, FinTop};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAction {
    group: FiniteGroup,
    space: FinTop,
    dom: Vec<Subset>,
    map: Vec<Vec<Option<usize>>>,
}

/// A total action of a group on a space, as a table `u[g][x] = g·x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalAction {
    group: FiniteGroup,
    space: FinTop,
    table: Vec<Vec<usize>>,
}

/// Checks that the rows indexed by `elems` form a continuous action of the
/// element set on `space`; returns a description of the first failure.
fn action_defect(group: &FiniteGroup, space: &FinTop, elems: Subset, table: &[Vec<usize>]) -> Option<String> {
    let n = space.size();
    for g in elems {
        let row = &table[g];
        if row.len() != n || row.iter().any(|&y| y >= n) {
            return Some(format!("row {g} is not a map of the {n} points"));
        }
        if !is_homeomorphism(row, space, space) {
            return Some(format!("u_{g} is not a homeomorphism"));
        }
    }
    let id = group.identity();
    if let Some(x) = (0..n).find(|&x| table[id][x] != x) {
        return Some(format!("identity moves point {x}"));
    }
    for g in elems {
        for h in elems {
            let gh = group.mul(g, h);
            if let Some(x) = (0..n).find(|&x| table[g][table[h][x]] != table[gh][x]) {
                return Some(format!("u_{g}(u_{h}({x})) != u_{gh}({x})"));
            }
        }
    }
    None
}

impl TotalAction {
    pub fn new(group: FiniteGroup, space: FinTop, table: Vec<Vec<usize>>) -> Result<Self> {
        if table.len() != group.order() {
            return Err(Error::NotAnAction(format!(
                "{} rows for a group of order {}",
                table.len(),
                group.order()
            )));
        }
        if let Some(why) = action_defect(&group, &space, group.all(), &table) {
            return Err(Error::NotAnAction(why));
        }
        Ok(TotalAction { group, space, table })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn space(&self) -> &FinTop {
        &self.space
    }

    pub fn apply(&self, g: Elem, x: usize) -> usize {
        self.table[g][x]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// The action viewed as a partial action with every domain full.
    pub fn to_partial(&self) -> PartialAction {
        self.induced(self.space.full())
            .expect("the full subset is always valid")
    }

    /// Orbit relation of the action.
    pub fn orbit_equivalence(&self) -> EqRel {
        let n = self.space.size();
        let pairs = (0..n).flat_map(|x| self.group.elements().map(move |g| (x, g)));
        EqRel::generated_by(n, pairs.map(|(x, g)| (x, self.table[g][x])).collect::<Vec<_>>())
    }

    /// The partial action induced on a subset `X ⊆ Y`: `X_g = X ∩ u_g(X)` and
    /// `m_g` is `u_g` restricted to `X_{g⁻¹}`. Points of `X` are relabelled
    /// `0..|X|` in increasing order and carry the subspace topology.
    pub fn induced(&self, x: Subset) -> Result<PartialAction> {
        let space = self.space.subspace(x)?;
        let points = x.to_vec();
        let index = |p: usize| points.binary_search(&p).ok();
        let mut dom = Vec::with_capacity(self.group.order());
        let mut map = Vec::with_capacity(self.group.order());
        for g in self.group.elements() {
            let image = x.map(|p| self.table[g][p]);
            dom.push((x & image).map(|p| index(p).expect("point of X")));
            map.push(
                points
                    .iter()
                    .map(|&p| index(self.table[g][p]))
                    .collect::<Vec<_>>(),
            );
        }
        PartialAction::new(self.group.clone(), space, dom, map)
    }
}

/// First violation found for one named axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub witness: String,
}

/// Outcome of [`PartialAction::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    /// PA1–PA3 on the partial function, plus consistency of the `X_g` table
    /// with its definition `X_{g⁻¹} = {x : g·x exists}`.
    pub pair: Vec<Violation>,
    /// Bijectivity of each `m_g : X_{g⁻¹} → X_g` and axioms (i)–(iii).
    pub bijection: Vec<Violation>,
    /// Openness of domains and homeomorphy of the maps; `None` when the
    /// set-level axioms already fail.
    pub topological: Option<Vec<Violation>>,
    /// `G*X` as a subset of `G×X` and whether it is open (= G-delta here).
    pub star_set: Subset,
    pub star_set_open: bool,
}

impl Validation {
    pub fn formulations_agree(&self) -> bool {
        self.pair.is_empty() == self.bijection.is_empty()
    }

    pub fn is_partial_action(&self) -> bool {
        self.pair.is_empty() && self.bijection.is_empty()
    }

    pub fn is_topological(&self) -> bool {
        matches!(&self.topological, Some(v) if v.is_empty())
    }

    pub fn is_valid(&self) -> bool {
        self.is_partial_action() && self.is_topological() && self.formulations_agree()
    }

    pub fn violations(&self) -> impl Iterator<Item = &Violation> {
        self.pair
            .iter()
            .chain(&self.bijection)
            .chain(self.topological.iter().flatten())
    }

    pub fn to_check(&self) -> Check {
        fn section(name: &str, axioms: &[&'static str], found: &[Violation]) -> Check {
            Check::section(
                name,
                axioms
                    .iter()
                    .map(|&a| {
                        Check::from_witness(a, found.iter().find(|v| v.axiom == a).map(|v| v.witness.clone()))
                    })
                    .collect(),
            )
        }
        let topological = match &self.topological {
            Some(found) => section("topological", TOPOLOGICAL_AXIOMS, found),
            None => Check::not_applicable("topological", "set-level axioms fail"),
        };
        let agree = if self.formulations_agree() {
            Check::pass("formulations agree")
        } else {
            Check::fail(
                "formulations agree",
                format!(
                    "pair formulation {} but bijection formulation {}",
                    verdict(self.pair.is_empty()),
                    verdict(self.bijection.is_empty())
                ),
            )
        };
        let star = Check::info(
            "G*X open (G-delta)",
            format!("G*X = {} is_open={}", self.star_set, self.star_set_open),
        );
        Check::section(
            "partial action axioms",
            vec![
                section("pair formulation", PAIR_AXIOMS, &self.pair),
                section("bijection formulation", BIJECTION_AXIOMS, &self.bijection),
                agree,
                topological,
                star,
            ],
        )
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "passes"
    } else {
        "fails"
    }
}

pub const PAIR_AXIOMS: &[&str] = &["X_g consistency", "PA1", "PA2", "PA3"];
pub const BIJECTION_AXIOMS: &[&str] = &["m_g bijective", "(i)", "(ii)", "(iii)"];
pub const TOPOLOGICAL_AXIOMS: &[&str] = &["X_g open", "m_g homeomorphism"];

impl PartialAction {
    /// Assembles a partial action from its tables, checking only their shape.
    /// Axioms are checked by [`validate`](Self::validate).
    pub fn new(
        group: FiniteGroup,
        space: FinTop,
        dom: Vec<Subset>,
        map: Vec<Vec<Option<usize>>>,
    ) -> Result<Self> {
        let (k, n) = (group.order(), space.size());
        if dom.len() != k || map.len() != k {
            return Err(Error::Malformed(format!(
                "expected {k} domains and maps, got {} and {}",
                dom.len(),
                map.len()
            )));
        }
        for (g, d) in dom.iter().enumerate() {
            if !d.is_subset_of(space.full()) {
                return Err(Error::InvalidSubset {
                    set: *d,
                    size: n,
                    reason: "domain leaves the space",
                });
            }
            if map[g].len() != n {
                return Err(Error::Malformed(format!("map {g} has wrong length")));
            }
            if let Some(x) = map[g].iter().position(|y| matches!(y, Some(y) if *y >= n)) {
                return Err(Error::Malformed(format!("m_{g}({x}) is not a point")));
            }
        }
        Ok(PartialAction {
            group,
            space,
            dom,
            map,
        })
    }

    /// Builds the domain table from the maps via `X_g = {x : g⁻¹·x exists}`.
    pub fn from_maps(group: FiniteGroup, space: FinTop, map: Vec<Vec<Option<usize>>>) -> Result<Self> {
        let dom = group
            .elements()
            .map(|g| match map.get(group.inv(g)) {
                Some(row) => (0..row.len()).filter(|&x| row[x].is_some()).collect(),
                None => Subset::EMPTY,
            })
            .collect();
        Self::new(group, space, dom, map)
    }

    /// Restriction to a subgroup: `m_g = a_g` for `g ∈ H`, `X_g = ∅` otherwise.
    /// `action` has a row per element of the group; rows outside `H` are ignored.
    pub fn subgroup_restriction(
        group: FiniteGroup,
        h: Subset,
        space: FinTop,
        action: &[Vec<usize>],
    ) -> Result<Self> {
        if !group.is_subgroup(h) {
            return Err(Error::NotASubgroup(h));
        }
        if action.len() != group.order() {
            return Err(Error::NotAnAction(format!(
                "{} rows for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        if let Some(why) = action_defect(&group, &space, h, action) {
            return Err(Error::NotAnAction(why));
        }
        let n = space.size();
        let dom = group
            .elements()
            .map(|g| {
                if h.contains(g) {
                    space.full()
                } else {
                    Subset::EMPTY
                }
            })
            .collect();
        let map = group
            .elements()
            .map(|g| (0..n).map(|x| h.contains(g).then(|| action[g][x])).collect())
            .collect();
        Self::new(group, space, dom, map)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn space(&self) -> &FinTop {
        &self.space
    }

    pub fn size(&self) -> usize {
        self.space.size()
    }

    /// `X_g`.
    pub fn domain(&self, g: Elem) -> Subset {
        self.dom[g]
    }

    pub fn domains(&self) -> &[Subset] {
        &self.dom
    }

    pub fn maps(&self) -> &[Vec<Option<usize>>] {
        &self.map
    }

    /// `g·x` if it exists.
    pub fn apply(&self, g: Elem, x: usize) -> Option<usize> {
        self.map[g][x]
    }

    /// Replaces one map entry; used to build mutants.
    pub fn with_entry(&self, g: Elem, x: usize, value: Option<usize>) -> Self {
        let mut out = self.clone();
        out.map[g][x] = value;
        out
    }

    /// Replaces one domain; used to build mutants.
    pub fn with_domain(&self, g: Elem, d: Subset) -> Self {
        let mut out = self.clone();
        out.dom[g] = d;
        out
    }

    /// `G^x = {g : g·x exists}`.
    pub fn g_upper(&self, x: usize) -> Subset {
        self.group
            .elements()
            .filter(|&g| self.map[g][x].is_some())
            .collect()
    }

    /// `G_x = {g ∈ G^x : g·x = x}`.
    pub fn stabilizer(&self, x: usize) -> Subset {
        self.group
            .elements()
            .filter(|&g| self.map[g][x] == Some(x))
            .collect()
    }

    /// `G^x·x`.
    pub fn orbit(&self, x: usize) -> Subset {
        self.group.elements().filter_map(|g| self.map[g][x]).collect()
    }

    /// `G*X ⊆ G×X`, with `(g, x)` at index `g * |X| + x`.
    pub fn star_set(&self) -> Subset {
        let n = self.size();
        self.group
            .elements()
            .flat_map(|g| {
                (0..n)
                    .filter(move |&x| self.map[g][x].is_some())
                    .map(move |x| g * n + x)
            })
            .collect()
    }

    /// The orbit equivalence relation `E^p_G`.
    pub fn orbit_equivalence(&self) -> Result<EqRel> {
        let orbits: Vec<Subset> = (0..self.size()).map(|x| self.orbit(x)).collect();
        EqRel::from_predicate(self.size(), |x, y| orbits[x].contains(y))
    }

    pub fn validate(&self) -> Validation {
        let pair = self.pair_violations();
        let bijection = self.bijection_violations();
        let topological = (pair.is_empty() && bijection.is_empty()).then(|| self.topological_violations());
        let star_set = self.star_set();
        let star_set_open = match self.space.product_with_discrete(self.group.order()) {
            Ok(p) => p.is_gdelta(star_set),
            Err(_) => false,
        };
        Validation {
            pair,
            bijection,
            topological,
            star_set,
            star_set_open,
        }
    }

    fn pair_violations(&self) -> Vec<Violation> {
        let g = &self.group;
        let n = self.size();
        let id = g.identity();
        let m = &self.map;
        let mut out = Vec::new();
        let mut note = |axiom, witness: Option<String>| {
            if let Some(witness) = witness {
                out.push(Violation { axiom, witness });
            }
        };

        note(
            "X_g consistency",
            g.elements().find_map(|h| {
                let defined: Subset = (0..n).filter(|&x| m[h][x].is_some()).collect();
                let recorded = self.dom[g.inv(h)];
                (defined != recorded).then(|| {
                    let x = (defined | recorded) - (defined & recorded);
                    format!(
                        "g={}: X_g = {recorded} but {{x : g⁻¹·x exists}} = {defined} (differs at x={})",
                        g.inv(h),
                        x.min().unwrap_or(0)
                    )
                })
            }),
        );

        note(
            "PA1",
            g.elements().find_map(|h| {
                (0..n).find_map(|x| {
                    let y = m[h][x]?;
                    match m[g.inv(h)][y] {
                        Some(back) if back == x => None,
                        Some(back) => Some(format!("g={h}, x={x}: g⁻¹·(g·x) = {back} != x")),
                        None => Some(format!("g={h}, x={x}: g·x={y} but g⁻¹·{y} is undefined")),
                    }
                })
            }),
        );

        note(
            "PA2",
            g.elements().find_map(|a| {
                g.elements().find_map(|b| {
                    (0..n).find_map(|x| {
                        let y = m[b][x]?;
                        let z = m[a][y]?;
                        let ab = g.mul(a, b);
                        match m[ab][x] {
                            Some(w) if w == z => None,
                            Some(w) => Some(format!("g={a}, h={b}, x={x}: g·(h·x)={z} but (gh)·x={w}")),
                            None => Some(format!("g={a}, h={b}, x={x}: g·(h·x)={z} but (gh)·x undefined")),
                        }
                    })
                })
            }),
        );

        note(
            "PA3",
            (0..n)
                .find(|&x| m[id][x] != Some(x))
                .map(|x| format!("x={x}: 1·x = {:?}", m[id][x])),
        );
        out
    }

    fn bijection_violations(&self) -> Vec<Violation> {
        let g = &self.group;
        let n = self.size();
        let id = g.identity();
        let m = &self.map;
        let d = &self.dom;
        let image = |h: Elem, s: Subset| -> Subset { s.iter().filter_map(|x| m[h][x]).collect() };
        let mut out = Vec::new();
        let mut note = |axiom, witness: Option<String>| {
            if let Some(witness) = witness {
                out.push(Violation { axiom, witness });
            }
        };

        note(
            "m_g bijective",
            g.elements().find_map(|h| {
                let source = d[g.inv(h)];
                if let Some(x) = (0..n).find(|&x| m[h][x].is_some() != source.contains(x)) {
                    return Some(format!(
                        "g={h}, x={x}: m_g must be defined exactly on X_(g⁻¹) = {source}"
                    ));
                }
                let img = image(h, source);
                if img.len() != source.len() {
                    return Some(format!("g={h}: m_g is not injective on {source}"));
                }
                (img != d[h]).then(|| format!("g={h}: m_g(X_(g⁻¹)) = {img} but X_g = {}", d[h]))
            }),
        );

        let first = if d[id] != Subset::full(n) {
            Some(format!("X_1 = {} is not the whole space", d[id]))
        } else {
            (0..n)
                .find(|&x| m[id][x] != Some(x))
                .map(|x| format!("x={x}: m_1(x) = {:?}", m[id][x]))
        };
        note("(i)", first);

        note(
            "(ii)",
            g.elements().find_map(|a| {
                g.elements().find_map(|b| {
                    let lhs = image(a, d[g.inv(a)] & d[b]);
                    let rhs = d[a] & d[g.mul(a, b)];
                    (lhs != rhs)
                        .then(|| format!("g={a}, h={b}: m_g(X_(g⁻¹) ∩ X_h) = {lhs} but X_g ∩ X_gh = {rhs}"))
                })
            }),
        );

        note(
            "(iii)",
            g.elements().find_map(|a| {
                g.elements().find_map(|b| {
                    let ab = g.mul(a, b);
                    let target = d[a] & d[ab];
                    (d[g.inv(b)] & d[g.inv(ab)]).iter().find_map(|x| {
                        let composed = m[b][x].and_then(|y| m[a][y]);
                        match composed {
                            Some(z) if Some(z) == m[ab][x] && target.contains(z) => None,
                            _ => Some(format!(
                                "g={a}, h={b}, x={x}: m_g m_h(x) = {composed:?}, m_gh(x) = {:?}",
                                m[ab][x]
                            )),
                        }
                    })
                })
            }),
        );
        out
    }

    fn topological_violations(&self) -> Vec<Violation> {
        let g = &self.group;
        let mut out = Vec::new();
        if let Some(h) = g.elements().find(|&h| !self.space.is_open(self.dom[h])) {
            out.push(Violation {
                axiom: "X_g open",
                witness: format!("g={h}: X_g = {} is not open", self.dom[h]),
            });
        }
        let homeo = g.elements().find(|&h| {
            let (src, dst) = (self.dom[g.inv(h)], self.dom[h]);
            let (Ok(st), Ok(dt)) = (self.space.subspace(src), self.space.subspace(dst)) else {
                return true;
            };
            let targets = dst.to_vec();
            let f: Vec<usize> = src
                .iter()
                .map(|x| {
                    let y = self.map[h][x].expect("bijectivity checked");
                    targets.binary_search(&y).expect("image checked")
                })
                .collect();
            !is_homeomorphism(&f, &st, &dt)
        });
        if let Some(h) = homeo {
            out.push(Violation {
                axiom: "m_g homeomorphism",
                witness: format!("g={h}: m_g is not a homeomorphism X_(g⁻¹) → X_g"),
            });
        }
        out
    }

    /// Checks the three parts of the orbit lemma on this instance.
    pub fn orbit_lemma_report(&self) -> Check {
        let g = &self.group;
        let n = self.size();
        let uppers: Vec<Subset> = (0..n).map(|x| self.g_upper(x)).collect();

        let part_i = g.elements().find_map(|h| {
            self.dom[h].iter().find_map(|x| {
                let y = self.apply(g.inv(h), x)?;
                let lhs = g.right_mul(uppers[x], h);
                (lhs != uppers[y])
                    .then(|| format!("g={h}, x={x}: G^x·g = {lhs} but G^(g⁻¹·x) = {}", uppers[y]))
            })
        });

        let part_ii = match self.orbit_equivalence() {
            Ok(e) => {
                let quotient = self.space.quotient(&e);
                let pi = e.class_ids();
                let cont = is_continuous(pi, &self.space, &quotient);
                let open = is_open_map(pi, &self.space, &quotient);
                (!(cont && open)).then(|| format!("quotient map continuous={cont} open={open}"))
            }
            Err(err) => Some(err.to_string()),
        };

        let part_iii = (0..n).find_map(|x| {
            let stab = self.stabilizer(x);
            uppers[x].iter().find_map(|a| {
                g.elements()
                    .find(|&b| stab.contains(g.mul(g.inv(a), b)) && !uppers[x].contains(b))
                    .map(|b| format!("g={a}, h={b}, x={x}"))
            })
        });

        let sizes = self.orbit_equivalence().ok().and_then(|e| {
            (0..n).find_map(|x| {
                (0..n)
                    .find(|&y| e.related(x, y) && uppers[x].len() != uppers[y].len())
                    .map(|y| {
                        format!(
                            "x={x}, y={y}: |G^x|={} |G^y|={}",
                            uppers[x].len(),
                            uppers[y].len()
                        )
                    })
            })
        });

        Check::section(
            "orbit lemma",
            vec![
                Check::from_witness("(i) G^x g = G^(g⁻¹·x)", part_i),
                Check::from_witness("(ii) quotient map continuous and open", part_ii),
                Check::from_witness("(iii) g ∈ G^x, g⁻¹h ∈ G_x ⇒ h ∈ G^x", part_iii),
                Check::from_witness("|G^x| constant on classes", sizes),
            ],
        )
    }

    /// The partial action of `G` on `G×X` given by `(h, x) ↦ (h g⁻¹, g·x)` on
    /// `G × X_{g⁻¹}`. Point `(h, x)` has index `h * |X| + x`.
    pub fn hat_action(&self) -> Result<PartialAction> {
        let g = &self.group;
        let (k, n) = (g.order(), self.size());
        let space = self.space.product_with_discrete(k)?;
        let dom = g
            .elements()
            .map(|a| {
                (0..k).fold(Subset::EMPTY, |acc, h| {
                    acc | Subset::from_bits(self.dom[a].bits() << (h * n))
                })
            })
            .collect();
        let map = g
            .elements()
            .map(|a| {
                (0..k * n)
                    .map(|p| {
                        let (h, x) = (p / n, p % n);
                        self.map[a][x].map(|y| g.mul(h, g.inv(a)) * n + y)
                    })
                    .collect()
            })
            .collect();
        PartialAction::new(g.clone(), space, dom, map)
    }

    /// The partial action of `G` on `X×X` given by `(x, y) ↦ (x, g·y)` on
    /// `X × X_{g⁻¹}`. Point `(x, y)` has index `x * |X| + y`.
    pub fn beta_square(&self) -> Result<PartialAction> {
        let n = self.size();
        let space = self.space.product(&self.space)?;
        let dom = self
            .group
            .elements()
            .map(|a| {
                (0..n).fold(Subset::EMPTY, |acc, x| {
                    acc | Subset::from_bits(self.dom[a].bits() << (x * n))
                })
            })
            .collect();
        let map = self
            .group
            .elements()
            .map(|a| {
                (0..n * n)
                    .map(|p| {
                        let (x, y) = (p / n, p % n);
                        self.map[a][y].map(|z| x * n + z)
                    })
                    .collect()
            })
            .collect();
        PartialAction::new(self.group.clone(), space, dom, map)
    }
}
