//! Selectors and transversals, the transversal topology `τ` on `X_G`, and the
//! reductions between `E^p_G` and the orbit relation of the enveloping action.
//!
//! At finite scale "Borel" means the algebra generated by a topology, so the
//! Borel-structure claims become equalities of finite set algebras, compared
//! through their atoms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::globalize::Globalization;
use crate::group::Elem;
use crate::paction::PartialAction;
use crate::relation::EqRel;
use crate::report::Check;
use crate::subset::Subset;
use crate::topology::{FinTop, SetAlgebra};

/// A map `S` with `S(x) E x` and `x E y ⇔ S(x) = S(y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectorMap {
    image: Vec<usize>,
}

impl SelectorMap {
    pub fn from_image(image: Vec<usize>) -> Self {
        SelectorMap { image }
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// First violated selector condition for `e`, if any.
    pub fn defect(&self, e: &EqRel) -> Option<String> {
        let n = self.size();
        if n != e.size() {
            return Some(format!("selector on {n} points for a relation on {}", e.size()));
        }
        if let Some(x) = (0..n).find(|&x| self.image[x] >= n || !e.related(x, self.image[x])) {
            return Some(format!("S({x}) is not related to {x}"));
        }
        if let Some(x) = (0..n).find(|&x| self.image[self.image[x]] != self.image[x]) {
            return Some(format!("S(S({x})) != S({x})"));
        }
        (0..n).find_map(|x| {
            (0..n)
                .find(|&y| e.related(x, y) != (self.image[x] == self.image[y]))
                .map(|y| {
                    format!(
                        "x={x}, y={y}: related={} but S(x)=S(y) is {}",
                        e.related(x, y),
                        self.image[x] == self.image[y]
                    )
                })
        })
    }

    /// Fixed points of `S`.
    pub fn transversal(&self) -> Subset {
        (0..self.size()).filter(|&x| self.image[x] == x).collect()
    }
}

/// `S(x)` = least element of the class of `x`.
pub fn min_selector(e: &EqRel) -> SelectorMap {
    SelectorMap {
        image: (0..e.size()).map(|x| e.rep(e.class_of(x))).collect(),
    }
}

/// Checks on the instance that `(1,x)` and `(g,y)` are hat-related exactly
/// when `g ∈ G^y` and `g·y = x`.
fn identity_slice_lemma(pa: &PartialAction, hat: &EqRel) -> Option<String> {
    let g = pa.group();
    let n = pa.size();
    let id = g.identity();
    (0..n).find_map(|x| {
        g.elements().find_map(|a| {
            (0..n).find_map(|y| {
                let related = hat.related(id * n + x, a * n + y);
                let predicted = pa.apply(a, y) == Some(x);
                (related != predicted).then(|| format!("x={x}, g={a}, y={y}"))
            })
        })
    })
}

/// Selector for the hat-orbit relation on `G×X`, normalized so that
/// `S'(g,x) = (1, g·x)` whenever `g ∈ G^x`; every `(1,x)` is then fixed.
pub fn normalized_hat_selector(pa: &PartialAction) -> Result<SelectorMap> {
    let hat = pa.hat_action()?.orbit_equivalence()?;
    if let Some(w) = identity_slice_lemma(pa, &hat) {
        return Err(Error::AxiomViolation(format!(
            "(1,x) hat-related to (g,y) mismatch at {w}"
        )));
    }
    let n = pa.size();
    let id = pa.group().identity();
    let mut s = min_selector(&hat);
    for p in 0..s.size() {
        if let Some(y) = pa.apply(p / n, p % n) {
            s.image[p] = id * n + y;
        }
    }
    if let Some(w) = s.defect(&hat) {
        return Err(Error::AxiomViolation(format!("normalized selector broken: {w}")));
    }
    Ok(s)
}

/// The transversal topology on `X_G` and the Borel-structure clauses.
#[derive(Debug, Clone)]
pub struct BorelReport {
    /// `τ` on the classes of `X_G`.
    pub tau: FinTop,
    pub quotient_borel: SetAlgebra,
    pub tau_borel: SetAlgebra,
    /// Transversal `T ⊆ G×X`.
    pub transversal: Subset,
    /// `f⁻¹`: the transversal point of each class.
    pub section: Vec<usize>,
    pub quotient_open_count: usize,
    pub tau_open_count: usize,
    pub clauses: Check,
}

impl BorelReport {
    pub fn passed(&self) -> bool {
        self.clauses.passed()
    }
}

pub fn tau_topology(glob: &Globalization, s: &SelectorMap) -> Result<BorelReport> {
    let r = glob.relation();
    if let Some(w) = s.defect(r) {
        return Err(Error::AxiomViolation(format!("not a selector for R: {w}")));
    }
    let transversal = s.transversal();
    let classes = glob.num_classes();
    let mut section = vec![usize::MAX; classes];
    for t in transversal {
        let c = r.class_of(t);
        if section[c] != usize::MAX {
            return Err(Error::AxiomViolation(format!(
                "transversal meets class {c} twice"
            )));
        }
        section[c] = t;
    }
    if let Some(c) = section.iter().position(|&t| t == usize::MAX) {
        return Err(Error::AxiomViolation(format!("transversal misses class {c}")));
    }

    let product = glob.product();
    let tau = FinTop::from_neighbourhoods(
        section
            .iter()
            .map(|&t| r.project(product.nbhd(t) & transversal))
            .collect(),
    )?;
    let quotient = glob.space();

    let extends = (0..classes)
        .find(|&c| !tau.nbhd(c).is_subset_of(quotient.nbhd(c)))
        .map(|c| format!("minimal quotient-open set around class {c} is not τ-open"));

    let joined = product.borel_algebra().atom_relation().join(r);
    let quotient_borel = SetAlgebra::from_atoms(EqRel::from_labels(
        &(0..classes)
            .map(|c| joined.class_of(r.rep(c)))
            .collect::<Vec<_>>(),
    ));
    let tau_borel = tau.borel_algebra();
    let borel_equal = (quotient_borel != tau_borel).then(|| {
        format!(
            "quotient atoms {:?} vs τ atoms {:?}",
            quotient_borel.atoms(),
            tau_borel.atoms()
        )
    });

    let pa = glob.source();
    let image = glob.iota_image();
    let star_in_t = pa.star_set() & transversal;
    let preimage_in_t = transversal
        .iter()
        .filter(|&t| image.contains(r.class_of(t)))
        .collect::<Subset>();
    let iota_borel = if !tau_borel.contains(image) {
        Some(format!("ι(X) = {image} is not τ-Borel"))
    } else if preimage_in_t != star_in_t {
        Some(format!("f⁻¹(ι(X)) = {preimage_in_t} but (G*X) ∩ T = {star_in_t}"))
    } else {
        None
    };

    let positions = image.to_vec();
    let pos = |c: usize| positions.binary_search(&c).expect("class in image");
    let sub_borel = tau.subspace(image)?.borel_algebra();
    let x_atoms = pa.space().borel_algebra();
    let mut labels = vec![0; positions.len()];
    for x in 0..pa.size() {
        labels[pos(glob.iota(x))] = x_atoms.atom_relation().class_of(x);
    }
    let transported = SetAlgebra::from_atoms(EqRel::from_labels(&labels));
    let x_borel = (sub_borel != transported).then(|| {
        format!(
            "Borel(ι(X), τ) atoms {:?} vs ι(Borel(X)) atoms {:?}",
            sub_borel.atoms(),
            transported.atoms()
        )
    });

    let measurable = pa
        .group()
        .elements()
        .find(|&g| !tau_borel.is_measurable(&glob.mu_table()[g], &tau_borel))
        .map(|g| format!("μ_{g} is not τ-Borel measurable"));

    let quotient_open_count = quotient.opens().len();
    let tau_open_count = tau.opens().len();
    let clauses = Check::section(
        "transversal topology",
        vec![
            Check::from_witness("(a) τ extends the quotient topology", extends),
            Check::from_witness("(b) quotient Borel structure = Borel(τ)", borel_equal),
            Check::from_witness("(c) ι(X) is τ-Borel", iota_borel),
            Check::from_witness("(d) Borel(X) = Borel(X, τ_X)", x_borel),
            Check::from_witness("(e) μ is Borel(τ)-measurable", measurable),
            Check::info(
                "open families",
                format!(
                    "quotient {quotient_open_count} opens, τ {tau_open_count} opens, strictly finer: {}",
                    tau != *quotient
                ),
            ),
        ],
    );

    Ok(BorelReport {
        tau,
        quotient_borel,
        tau_borel,
        transversal,
        section,
        quotient_open_count,
        tau_open_count,
        clauses,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuityRow {
    pub g: Elem,
    /// Classes at which `μ_g` is not τ-continuous.
    pub discontinuous_at: Subset,
}

/// Localizes τ-discontinuities of each `μ_g`: `μ_g` is continuous at `c` iff it
/// maps the minimal τ-neighbourhood of `c` into that of `μ_g(c)`.
pub fn mu_tau_continuity(glob: &Globalization, report: &BorelReport) -> Vec<ContinuityRow> {
    let tau = &report.tau;
    glob.source()
        .group()
        .elements()
        .map(|g| {
            let mu = &glob.mu_table()[g];
            let discontinuous_at = (0..glob.num_classes())
                .filter(|&c| !tau.nbhd(c).map(|d| mu[d]).is_subset_of(tau.nbhd(mu[c])))
                .collect();
            ContinuityRow { g, discontinuous_at }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bireducibility {
    /// `f([g,x]) = proj₂(S'(g,x))`.
    pub f: Vec<usize>,
    pub iota_reduces: Option<String>,
    pub f_reduces: Option<String>,
}

impl Bireducibility {
    pub fn to_check(&self) -> Check {
        Check::section(
            "bireducibility",
            vec![
                Check::from_witness("ι reduces E^p_G to E_G", self.iota_reduces.clone()),
                Check::from_witness("f = proj₂∘S' reduces E_G to E^p_G", self.f_reduces.clone()),
            ],
        )
    }
}

pub fn bireducibility(glob: &Globalization, s: &SelectorMap) -> Result<Bireducibility> {
    let pa = glob.source();
    let n = pa.size();
    let partial = pa.orbit_equivalence()?;
    let global = glob.orbit_equivalence();
    let r = glob.relation();

    let mut f = Vec::with_capacity(glob.num_classes());
    for c in 0..glob.num_classes() {
        let values: Subset = r.class_members(c).iter().map(|p| s.apply(p) % n).collect();
        if values.len() != 1 {
            return Err(Error::AxiomViolation(format!(
                "f not well defined on class {c}: values {values}"
            )));
        }
        f.push(values.min().expect("nonempty"));
    }

    let iota_reduces = (0..n).find_map(|x| {
        (0..n)
            .find(|&y| partial.related(x, y) != global.related(glob.iota(x), glob.iota(y)))
            .map(|y| format!("x={x}, y={y}"))
    });
    let k = glob.num_classes();
    let f_reduces = (0..k).find_map(|c| {
        (0..k)
            .find(|&d| global.related(c, d) != partial.related(f[c], f[d]))
            .map(|d| format!("classes {c}, {d}"))
    });
    Ok(Bireducibility {
        f,
        iota_reduces,
        f_reduces,
    })
}

/// For each `(g,x)`, `ρ(h) = (g h⁻¹, h·x)` is a bijection from `G^x` onto the
/// hat orbit of `(g,x)` with inverse `(j, y) ↦ j⁻¹ g`; both sides are
/// discrete, so a bijection is a homeomorphism.
pub fn rho_check(pa: &PartialAction) -> Check {
    const NAME: &str = "ρ: G^x → hat orbit of (g,x) is a homeomorphism";
    let hat = match pa.hat_action() {
        Ok(h) => h,
        Err(e) => return Check::fail(NAME, e.to_string()),
    };
    let grp = pa.group();
    let n = pa.size();
    let witness = grp.elements().find_map(|g| {
        (0..n).find_map(|x| {
            let p = g * n + x;
            let orbit = hat.orbit(p);
            let domain = pa.g_upper(x);
            let rho = |h: Elem| pa.apply(h, x).map(|y| grp.mul(g, grp.inv(h)) * n + y);
            let rho_inv = |q: usize| grp.mul(grp.inv(q / n), g);
            let mut image = Subset::EMPTY;
            for h in domain {
                let Some(q) = rho(h) else {
                    return Some(format!("(g,x)=({g},{x}): ρ({h}) undefined"));
                };
                if !orbit.contains(q) {
                    return Some(format!("(g,x)=({g},{x}): ρ({h}) leaves the orbit"));
                }
                if rho_inv(q) != h {
                    return Some(format!("(g,x)=({g},{x}): ρ⁻¹(ρ({h})) != {h}"));
                }
                image.insert(q);
            }
            if image != orbit || image.len() != domain.len() {
                return Some(format!("(g,x)=({g},{x}): ρ is not a bijection onto {orbit}"));
            }
            orbit
                .iter()
                .find(|&q| rho(rho_inv(q)) != Some(q))
                .map(|q| format!("(g,x)=({g},{x}): ρ(ρ⁻¹({q})) != {q}"))
        })
    });
    Check::from_witness(NAME, witness)
}

/// All selector-side checks for one instance.
pub fn selector_report(pa: &PartialAction) -> Result<(Globalization, SelectorMap, BorelReport, Check)> {
    let glob = Globalization::build(pa)?;
    let s = normalized_hat_selector(pa)?;
    let borel = tau_topology(&glob, &s)?;
    let continuity = mu_tau_continuity(&glob, &borel);
    let bi = bireducibility(&glob, &s)?;
    let rows = continuity
        .iter()
        .map(|row| {
            Check::info(
                format!("μ_{} τ-continuity", row.g),
                if row.discontinuous_at.is_empty() {
                    "continuous".to_string()
                } else {
                    format!("discontinuous at classes {}", row.discontinuous_at)
                },
            )
        })
        .collect();
    let check = Check::section(
        "selectors and Borel structure",
        vec![
            Check::from_witness("normalized selector is a selector", s.defect(glob.relation())),
            borel.clauses.clone(),
            Check::section("μ continuity for τ", rows),
            bi.to_check(),
            rho_check(pa),
        ],
    );
    Ok((glob, s, borel, check))
}
