//! The enveloping space `X_G = (G×X)/R`, its action and the embedding of `X`.
//!
//! Points of `G×X` are indexed `g * |X| + x`, so the canonical class
//! representative (the smallest index) is the lexicographically least pair.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Elem;
use crate::paction::{PartialAction, TotalAction};
use crate::relation::EqRel;
use crate::report::Check;
use crate::subset::Subset;
use crate::topology::{is_homeomorphism, FinTop};

/// `(g,x) R (h,y)` iff `x ∈ X_{g⁻¹h}` and `m_{h⁻¹g}(x) = y`.
pub fn relation_r(pa: &PartialAction) -> Result<EqRel> {
    let g = pa.group();
    let n = pa.size();
    EqRel::from_predicate(g.order() * n, |p, q| {
        let (a, x) = (p / n, p % n);
        let (b, y) = (q / n, q % n);
        pa.domain(g.mul(g.inv(a), b)).contains(x) && pa.apply(g.mul(g.inv(b), a), x) == Some(y)
    })
}

#[derive(Debug, Clone)]
pub struct Globalization {
    source: PartialAction,
    product: FinTop,
    relation: EqRel,
    space: FinTop,
    mu: Vec<Vec<usize>>,
    iota: Vec<usize>,
}

impl Globalization {
    pub fn build(pa: &PartialAction) -> Result<Self> {
        let g = pa.group();
        let n = pa.size();
        let product = pa.space().product_with_discrete(g.order())?;
        let relation = relation_r(pa)?;
        let space = product.quotient(&relation);

        let mut mu = Vec::with_capacity(g.order());
        for a in g.elements() {
            let mut row = Vec::with_capacity(relation.num_classes());
            for c in 0..relation.num_classes() {
                let images: Subset = relation
                    .class_members(c)
                    .iter()
                    .map(|p| relation.class_of(g.mul(a, p / n) * n + p % n))
                    .collect();
                if images.len() != 1 {
                    return Err(Error::AxiomViolation(format!(
                        "enveloping action not well defined: g={a} sends class {c} to classes {images}"
                    )));
                }
                row.push(images.min().expect("nonempty class"));
            }
            mu.push(row);
        }

        let id = g.identity();
        let iota: Vec<usize> = (0..n).map(|x| relation.class_of(id * n + x)).collect();
        if iota.iter().copied().collect::<Subset>().len() != n {
            return Err(Error::AxiomViolation("embedding of X is not injective".into()));
        }

        Ok(Globalization {
            source: pa.clone(),
            product,
            relation,
            space,
            mu,
            iota,
        })
    }

    pub fn source(&self) -> &PartialAction {
        &self.source
    }

    /// `G×X` with the product topology.
    pub fn product(&self) -> &FinTop {
        &self.product
    }

    pub fn relation(&self) -> &EqRel {
        &self.relation
    }

    /// `X_G` with the quotient topology.
    pub fn space(&self) -> &FinTop {
        &self.space
    }

    pub fn num_classes(&self) -> usize {
        self.relation.num_classes()
    }

    /// `μ(g, c)`.
    pub fn mu(&self, g: Elem, c: usize) -> usize {
        self.mu[g][c]
    }

    pub fn mu_table(&self) -> &[Vec<usize>] {
        &self.mu
    }

    /// `ι(x) = [1, x]`.
    pub fn iota(&self, x: usize) -> usize {
        self.iota[x]
    }

    pub fn iota_map(&self) -> &[usize] {
        &self.iota
    }

    pub fn iota_image(&self) -> Subset {
        self.iota.iter().copied().collect()
    }

    /// Class of the pair `(g, x)`.
    pub fn class_of(&self, g: Elem, x: usize) -> usize {
        self.relation.class_of(g * self.source.size() + x)
    }

    /// Canonical representative `(g, x)` of a class.
    pub fn rep(&self, c: usize) -> (Elem, usize) {
        let p = self.relation.rep(c);
        let n = self.source.size();
        (p / n, p % n)
    }

    pub fn reps(&self) -> Vec<(Elem, usize)> {
        (0..self.num_classes()).map(|c| self.rep(c)).collect()
    }

    /// The enveloping action as a total action on `X_G`.
    pub fn enveloping_action(&self) -> Result<TotalAction> {
        TotalAction::new(self.source.group().clone(), self.space.clone(), self.mu.clone())
    }

    /// Orbit relation `E_G` of the enveloping action.
    pub fn orbit_equivalence(&self) -> EqRel {
        let k = self.source.group().order();
        let pairs = (0..self.num_classes()).flat_map(|c| (0..k).map(move |g| (c, g)));
        EqRel::generated_by(
            self.num_classes(),
            pairs.map(|(c, g)| (c, self.mu[g][c])).collect::<Vec<_>>(),
        )
    }

    /// Embedding, equivariance, openness of `ι(X)` and recovery of the
    /// partial action from the enveloping action.
    pub fn check_embedding(&self) -> Check {
        let pa = &self.source;
        let g = pa.group();
        let n = pa.size();
        let image = self.iota_image();
        let positions = image.to_vec();
        let pos = |c: usize| positions.binary_search(&c).expect("class in image");
        let f: Vec<usize> = self.iota.iter().map(|&c| pos(c)).collect();

        let embedding = match self.space.subspace(image) {
            Ok(sub) if is_homeomorphism(&f, pa.space(), &sub) => None,
            Ok(_) => Some("ι is not a homeomorphism onto ι(X)".to_string()),
            Err(e) => Some(e.to_string()),
        };

        let equivariance = g.elements().find_map(|a| {
            (0..n).find_map(|x| {
                let y = pa.apply(a, x)?;
                (self.mu[a][self.iota[x]] != self.iota[y]).then(|| {
                    format!(
                        "g={a}, x={x}: μ_g(ι(x)) = {} but ι(g·x) = {}",
                        self.mu[a][self.iota[x]], self.iota[y]
                    )
                })
            })
        });

        let star_open = self.product.is_open(pa.star_set());
        let image_open = if star_open {
            Check::from_witness(
                "ι(X) open in X_G",
                (!self.space.is_open(image)).then(|| format!("ι(X) = {image} is not open")),
            )
        } else {
            Check::not_applicable("ι(X) open in X_G", "hypothesis fails: G*X is not open in G×X")
        };

        let (continuity, recovered) = match self.enveloping_action() {
            Ok(action) => {
                let recovered = match action.induced(image) {
                    Ok(induced) => self.compare_recovered(&induced, &f),
                    Err(e) => Some(e.to_string()),
                };
                (None, recovered)
            }
            Err(e) => (Some(e.to_string()), Some("enveloping action invalid".to_string())),
        };

        Check::section(
            "embedding into the enveloping space",
            vec![
                Check::from_witness("ι homeomorphism onto ι(X)", embedding),
                Check::from_witness("μ_g ∘ ι = ι ∘ m_g on X_(g⁻¹)", equivariance),
                image_open,
                Check::from_witness("induced action on ι(X) equals m", recovered),
                Check::from_witness("every μ_g a homeomorphism of X_G", continuity),
            ],
        )
    }

    fn compare_recovered(&self, induced: &PartialAction, f: &[usize]) -> Option<String> {
        let pa = &self.source;
        let g = pa.group();
        if induced.space() != &pa.space().transport(f).ok()? {
            return Some("topology on ι(X) differs from the transported topology of X".into());
        }
        g.elements().find_map(|a| {
            let dom = pa.domain(a).map(|x| f[x]);
            if induced.domain(a) != dom {
                return Some(format!(
                    "g={a}: induced domain {} vs ι(X_g) {dom}",
                    induced.domain(a)
                ));
            }
            (0..pa.size()).find_map(|x| {
                let expect = pa.apply(a, x).map(|y| f[y]);
                (induced.apply(a, f[x]) != expect).then(|| format!("g={a}, x={x}: maps differ"))
            })
        })
    }

    /// Specialization preorder of `X_G` and the action graph of `μ`, as two
    /// DOT digraphs. `labels` names the points of `X`.
    pub fn to_dot(&self, labels: &[String]) -> String {
        let name = |c: usize| {
            let (g, x) = self.rep(c);
            format!(
                "[{g},{}]",
                labels.get(x).cloned().unwrap_or_else(|| x.to_string())
            )
        };
        let k = self.num_classes();
        let mut out = String::new();
        out.push_str("digraph specialization {\n");
        for c in 0..k {
            let _ = writeln!(out, "  c{c} [label=\"{}\"];", name(c));
        }
        for c in 0..k {
            for d in 0..k {
                if c != d && self.space.specializes(c, d) {
                    let _ = writeln!(out, "  c{c} -> c{d};");
                }
            }
        }
        out.push_str("}\n");
        out.push_str("digraph mu {\n");
        for c in 0..k {
            let _ = writeln!(out, "  c{c} [label=\"{}\"];", name(c));
        }
        for a in self.source.group().elements() {
            if a == self.source.group().identity() {
                continue;
            }
            for c in 0..k {
                let _ = writeln!(out, "  c{c} -> c{} [label=\"{a}\"];", self.mu[a][c]);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// `R` coincides with the orbit relation of the hat action on `G×X`.
pub fn check_hat_orbit_relation(pa: &PartialAction) -> Check {
    const NAME: &str = "R equals the hat-action orbit relation";
    let r = match relation_r(pa) {
        Ok(r) => r,
        Err(e) => return Check::fail(NAME, e.to_string()),
    };
    let hat = match pa.hat_action().and_then(|h| h.orbit_equivalence()) {
        Ok(h) => h,
        Err(e) => return Check::fail(NAME, e.to_string()),
    };
    let n = pa.size();
    let witness = (0..r.size()).find_map(|p| {
        (0..r.size())
            .find(|&q| r.related(p, q) != hat.related(p, q))
            .map(|q| {
                format!(
                    "({},{}) vs ({},{}): R={} hat={}",
                    p / n,
                    p % n,
                    q / n,
                    q % n,
                    r.related(p, q),
                    hat.related(p, q)
                )
            })
    });
    Check::from_witness(NAME, witness).with_detail(format!("{} classes", r.num_classes()))
}

/// The three Effros conditions, evaluated exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EffrosFlags {
    /// `E^p_G` open in `X×X`.
    pub relation_open: bool,
    /// Every orbit open in `X`.
    pub orbits_open: bool,
    /// `X/E^p_G` is T0.
    pub quotient_t0: bool,
    pub discrete_carrier: bool,
}

impl EffrosFlags {
    pub fn agree(&self) -> bool {
        self.relation_open == self.orbits_open && self.orbits_open == self.quotient_t0
    }
}

pub fn effros_flags(pa: &PartialAction) -> Result<EffrosFlags> {
    let e = pa.orbit_equivalence()?;
    let n = pa.size();
    let square = pa.space().product(pa.space())?;
    let graph: Subset = (0..n * n).filter(|&p| e.related(p / n, p % n)).collect();
    Ok(EffrosFlags {
        relation_open: square.is_gdelta(graph),
        orbits_open: e.classes().iter().all(|&c| pa.space().is_gdelta(c)),
        quotient_t0: pa.space().quotient(&e).separation().t0,
        discrete_carrier: *pa.space() == FinTop::discrete(n),
    })
}

pub fn effros_report(pa: &PartialAction) -> Check {
    let flags = match effros_flags(pa) {
        Ok(f) => f,
        Err(e) => return Check::fail("Effros conditions", e.to_string()),
    };
    let mut children = vec![
        Check::info("(i) E^p_G is G-delta", flags.relation_open.to_string()),
        Check::info("(ii) every orbit is G-delta", flags.orbits_open.to_string()),
        Check::info("(iii) X/E^p_G is T0", flags.quotient_t0.to_string()),
    ];
    children.push(if flags.discrete_carrier {
        Check::from_witness(
            "conditions equivalent",
            (!flags.agree()).then(|| {
                format!(
                    "(i)={} (ii)={} (iii)={}",
                    flags.relation_open, flags.orbits_open, flags.quotient_t0
                )
            }),
        )
    } else {
        Check::not_applicable(
            "conditions equivalent",
            format!(
                "carrier not discrete (not metrizable); flags agree={}",
                flags.agree()
            ),
        )
    });
    Check::section("Effros conditions", children)
}
