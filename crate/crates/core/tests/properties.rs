mod common;

use std::sync::OnceLock;

use common::{family, meager_by_definition, topologies, Instance};
use paglob::selector::{min_selector, normalized_hat_selector, tau_topology};
use paglob::spec::{ActionSpec, BUNDLED_EXAMPLE};
use paglob::topology::{is_continuous, is_homeomorphism};
use paglob::vaught::{delta_transform, star_transform, v_upper};
use paglob::{EqRel, FinTop, FiniteGroup, Globalization, PartialAction, SetFamily, Subset, TotalAction};
use proptest::prelude::*;

fn instances() -> &'static [Instance] {
    static FAMILY: OnceLock<Vec<Instance>> = OnceLock::new();
    FAMILY.get_or_init(|| family(4, 3))
}

fn valid() -> &'static [Instance] {
    static VALID: OnceLock<Vec<Instance>> = OnceLock::new();
    VALID.get_or_init(|| {
        instances()
            .iter()
            .filter(|i| i.pa.validate().is_valid())
            .cloned()
            .collect()
    })
}

fn valid_instance() -> impl Strategy<Value = &'static Instance> {
    (0..valid().len()).prop_map(|i| &valid()[i])
}

fn topology(max_n: usize) -> impl Strategy<Value = FinTop> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0u64..(1 << n), 0..6).prop_map(move |gens| {
            let gens: Vec<Subset> = gens.into_iter().map(Subset::from_bits).collect();
            FinTop::generated(n, &gens).unwrap()
        })
    })
}

/// Arbitrary domain and map tables, almost never a partial action.
fn raw_tables() -> impl Strategy<Value = PartialAction> {
    (1usize..=4, 1usize..=3).prop_flat_map(|(k, n)| {
        let doms = prop::collection::vec(0u64..(1 << n), k);
        let maps = prop::collection::vec(prop::collection::vec(prop::option::of(0..n), n), k);
        (
            doms,
            maps,
            topology(n).prop_filter("size", move |t| t.size() == n),
        )
            .prop_map(move |(d, m, t)| {
                let d = d.into_iter().map(Subset::from_bits).collect();
                PartialAction::new(FiniteGroup::cyclic(k).unwrap(), t, d, m).unwrap()
            })
    })
}

#[test]
fn meager_oracle_exhaustive() {
    for n in 1..=5 {
        for t in topologies(n) {
            for s in t.full().subsets() {
                for a in s.subsets() {
                    assert_eq!(
                        t.is_meager_in(a, s).unwrap(),
                        meager_by_definition(&t, a, s),
                        "{:?} A={a} S={s}",
                        t.neighbourhoods()
                    );
                }
            }
        }
    }
}

#[test]
fn labelled_topology_counts() {
    let counts: Vec<usize> = (1..=5).map(|n| topologies(n).len()).collect();
    assert_eq!(counts, vec![1, 4, 29, 355, 6942]);
}

#[test]
fn cyclic_tables_satisfy_group_axioms() {
    for k in 1..=16 {
        let g = FiniteGroup::cyclic(k).unwrap();
        let t = g.table();
        for a in 0..k {
            assert_eq!(g.inv(g.inv(a)), a);
            assert_eq!(t[a][g.inv(a)], g.identity());
            assert_eq!(t[g.identity()][a], a);
            for b in 0..k {
                for c in 0..k {
                    assert_eq!(t[t[a][b]][c], t[a][t[b][c]]);
                }
            }
        }
        assert_eq!(FiniteGroup::from_table(&t).unwrap(), g);
    }
}

/// Equivalence relation on `n` points from arbitrary labels.
fn labels(n: usize) -> impl Strategy<Value = EqRel> {
    prop::collection::vec(0..n, n).prop_map(|l| EqRel::from_labels(&l))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn interior_and_closure_bracket(t in topology(5), bits in 0u64..32) {
        let a = Subset::from_bits(bits) & t.full();
        prop_assert!(t.interior(a).is_subset_of(a) && a.is_subset_of(t.closure(a)));
        prop_assert_eq!(t.interior(t.interior(a)), t.interior(a));
        prop_assert_eq!(t.closure(t.closure(a)), t.closure(a));
    }

    #[test]
    fn quotient_opens_are_saturated_opens(
        (t, e) in topology(5).prop_flat_map(|t| { let n = t.size(); (Just(t), labels(n)) })
    ) {
        let q = t.quotient(&e);
        for c in Subset::full(e.num_classes()).subsets() {
            prop_assert_eq!(q.is_open(c), t.is_open(e.preimage(c)), "classes {}", c);
        }
    }

    #[test]
    fn borel_algebra_is_an_algebra_over_the_topology(t in topology(4)) {
        let members = t.borel_algebra().members();
        prop_assert!(members.is_closed_under_complement() && members.is_closed_under_union());
        for u in t.opens() {
            prop_assert!(members.contains(u) && members.contains(u.complement(t.size())));
        }
    }

    #[test]
    fn equivalence_from_labels_is_the_kernel(e in (1usize..=6).prop_flat_map(labels)) {
        for x in 0..e.size() {
            prop_assert!(e.class_members(e.class_of(x)).contains(x));
            prop_assert_eq!(e.related(x, e.rep(e.class_of(x))), true);
        }
    }

    #[test]
    fn orbits_are_classes(inst in valid_instance()) {
        let pa = &inst.pa;
        let e = pa.orbit_equivalence().unwrap();
        for x in 0..pa.size() {
            prop_assert_eq!(e.class_members(e.class_of(x)), pa.orbit(x));
            for y in 0..pa.size() {
                if e.related(x, y) {
                    prop_assert_eq!(pa.orbit(x), pa.orbit(y));
                    prop_assert_eq!(pa.g_upper(x).len(), pa.g_upper(y).len());
                }
            }
        }
    }

    #[test]
    fn enveloping_action_laws(inst in valid_instance()) {
        let pa = &inst.pa;
        let grp = pa.group();
        let glob = Globalization::build(pa).unwrap();
        let k = glob.num_classes();
        let space = glob.space();
        for c in 0..k {
            prop_assert_eq!(glob.mu(grp.identity(), c), c);
            for g in grp.elements() {
                for h in grp.elements() {
                    prop_assert_eq!(glob.mu(g, glob.mu(h, c)), glob.mu(grp.mul(g, h), c));
                }
            }
        }
        for g in grp.elements() {
            prop_assert!(is_homeomorphism(&glob.mu_table()[g], space, space));
            for x in pa.domain(grp.inv(g)).iter() {
                let y = pa.apply(g, x).unwrap();
                prop_assert_eq!(glob.mu(g, glob.iota(x)), glob.iota(y));
            }
        }
        let iota = glob.iota_map();
        prop_assert_eq!(glob.iota_image().len(), pa.size());
        prop_assert!(is_continuous(iota, pa.space(), space));
    }

    #[test]
    fn total_actions_envelope_themselves(t in topology(3), k in 1usize..=4, pick in any::<prop::sample::Index>()) {
        let actions: Vec<TotalAction> = common::cyclic_actions(&t, k);
        let act = &actions[pick.index(actions.len())];
        let glob = Globalization::build(&act.to_partial()).unwrap();
        prop_assert_eq!(glob.num_classes(), t.size());
        prop_assert_eq!(glob.iota_image(), Subset::full(t.size()));
    }

    #[test]
    fn normalized_selector_is_minimal_off_the_identity_slice(inst in valid_instance()) {
        let pa = &inst.pa;
        let hat = pa.hat_action().unwrap().orbit_equivalence().unwrap();
        let s = normalized_hat_selector(pa).unwrap();
        let m = min_selector(&hat);
        let n = pa.size();
        let id = pa.group().identity();
        let slice: Subset = (0..n).map(|x| id * n + x).collect();
        for &class in hat.classes() {
            if class.is_disjoint(slice) {
                for p in class.iter() {
                    prop_assert_eq!(s.apply(p), m.apply(p));
                }
            }
        }
    }

    #[test]
    fn tau_refines_quotient_with_equal_borel_sets(inst in valid_instance()) {
        let pa = &inst.pa;
        let glob = Globalization::build(pa).unwrap();
        let s = normalized_hat_selector(pa).unwrap();
        let report = tau_topology(&glob, &s).unwrap();
        let k = glob.num_classes();
        let quotient_opens = SetFamily::new(k, glob.space().opens()).unwrap();
        let tau_opens = SetFamily::new(k, report.tau.opens()).unwrap();
        prop_assert!(quotient_opens.is_subfamily_of(&tau_opens));
        // quotient Borel sets: class sets whose preimage in G×X is Borel
        let product_borel = glob.product().borel_algebra();
        let quotient_borel: Vec<Subset> = Subset::full(k)
            .subsets()
            .filter(|&c| product_borel.contains(glob.relation().preimage(c)))
            .collect();
        let tau_borel = report.tau.borel_algebra().members();
        prop_assert_eq!(quotient_borel, tau_borel.members().to_vec());
    }

    #[test]
    fn generated_is_idempotent(t in topology(5)) {
        prop_assert_eq!(FinTop::generated(t.size(), &t.opens()).unwrap(), t);
    }

    #[test]
    fn meager_oracle_on_five_points(t in topology(5), s_bits in 0u64..32, a_bits in 0u64..32) {
        let s = Subset::from_bits(s_bits) & t.full();
        let a = Subset::from_bits(a_bits) & s;
        prop_assert_eq!(t.is_meager_in(a, s).unwrap(), meager_by_definition(&t, a, s));
    }

    #[test]
    fn closure_interior_duality(t in topology(5), bits in 0u64..32) {
        let n = t.size();
        let a = Subset::from_bits(bits) & t.full();
        prop_assert_eq!(t.closure(a).complement(n), t.interior(a.complement(n)));
        prop_assert!(t.is_open(t.interior(a)) && t.is_closed(t.closure(a)));
        for c in 0..n {
            for d in 0..n {
                prop_assert_eq!(t.specializes(c, d), t.closure(Subset::singleton(d)).contains(c));
            }
        }
    }

    #[test]
    fn formulations_agree_on_raw_tables(pa in raw_tables()) {
        let v = pa.validate();
        prop_assert!(v.formulations_agree(), "pair {:?} bijection {:?}", v.pair, v.bijection);
    }

    #[test]
    fn induced_is_a_partial_action(i in 0..instances().len()) {
        let v = instances()[i].pa.validate();
        prop_assert!(v.is_partial_action());
    }

    #[test]
    fn induced_on_open_subsets_is_topological(t in topology(3), k in 1usize..=4, pick in any::<prop::sample::Index>()) {
        let actions = common::cyclic_actions(&t, k);
        let act = &actions[pick.index(actions.len())];
        for y in t.opens().into_iter().filter(|y| !y.is_empty()) {
            prop_assert!(act.induced(y).unwrap().validate().is_valid());
        }
        for g in 0..k {
            prop_assert!(is_homeomorphism(&act.table()[g], &t, &t));
        }
    }

    #[test]
    fn hat_and_beta_are_topological_partial_actions(inst in valid_instance()) {
        let hat = inst.pa.hat_action().unwrap();
        prop_assert!(hat.validate().is_valid(), "{}", inst.name);
        let beta = inst.pa.beta_square().unwrap();
        prop_assert!(beta.validate().is_valid(), "{}", inst.name);
    }

    #[test]
    fn vaught_monotone(inst in valid_instance(), a in 0u64..8, b in 0u64..8, v in 1u64..16, w in 0u64..16) {
        let pa = &inst.pa;
        let full = pa.space().full();
        let a = Subset::from_bits(a) & full;
        let b = (Subset::from_bits(b) & full) | a;
        let all = pa.group().all();
        let v = Subset::from_bits(v) & all;
        prop_assume!(!v.is_empty());
        let w = (Subset::from_bits(w) & all) | v;
        prop_assert!(delta_transform(pa, a, v).unwrap().is_subset_of(delta_transform(pa, b, v).unwrap()));
        prop_assert!(star_transform(pa, a, v).unwrap().is_subset_of(star_transform(pa, b, v).unwrap()));
        prop_assert!(delta_transform(pa, a, v).unwrap().is_subset_of(delta_transform(pa, a, w).unwrap()));
    }

    #[test]
    fn star_minus_delta_only_where_v_upper_is_empty(inst in valid_instance(), a in 0u64..8, v in 1u64..16) {
        let pa = &inst.pa;
        let a = Subset::from_bits(a) & pa.space().full();
        let v = Subset::from_bits(v) & pa.group().all();
        prop_assume!(!v.is_empty());
        let extra = star_transform(pa, a, v).unwrap() - delta_transform(pa, a, v).unwrap();
        for x in extra.iter() {
            prop_assert!(v_upper(pa, v, x).is_empty());
        }
    }

    #[test]
    fn normalized_selector_fixes_identity_slice(inst in valid_instance()) {
        let pa = &inst.pa;
        let hat = pa.hat_action().unwrap().orbit_equivalence().unwrap();
        let s = normalized_hat_selector(pa).unwrap();
        prop_assert_eq!(s.defect(&hat), None);
        let n = pa.size();
        let id = pa.group().identity();
        for x in 0..n {
            prop_assert_eq!(s.apply(id * n + x), id * n + x);
        }
        let t = s.transversal();
        for &class in hat.classes() {
            prop_assert_eq!((class & t).len(), 1);
        }
    }

    #[test]
    fn spec_round_trip(inst in valid_instance()) {
        let names: Vec<String> = (0..inst.pa.size()).map(|x| format!("p{x}")).collect();
        let spec = ActionSpec::from_partial_action(&inst.pa, &names, Some(inst.name.clone()));
        let text = spec.to_json_string();
        let parsed = ActionSpec::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &spec);
        prop_assert_eq!(parsed.to_partial_action().unwrap(), inst.pa.clone());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cli_never_panics_on_corrupted_input(cut in 0usize..400, insert in "[\\[\\]{}\":,a-z0-9 ]{0,6}") {
        let text = BUNDLED_EXAMPLE;
        let cut = cut.min(text.len());
        let cut = (0..=cut).rev().find(|&i| text.is_char_boundary(i)).unwrap();
        let corrupted = format!("{}{}{}", &text[..cut], insert, &text[(cut + 7).min(text.len())..]);
        let dir = std::env::temp_dir().join(format!("paglob-fuzz-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("spec.json");
        std::fs::write(&path, &corrupted).unwrap();
        let outcome = std::panic::catch_unwind(|| {
            let (mut out, mut err) = (Vec::new(), Vec::new());
            paglob::cli::run(["paglob", "report", path.to_str().unwrap(), "--format", "json"], &mut out, &mut err)
        });
        prop_assert!(matches!(outcome, Ok(0..=2)), "{corrupted}");
    }
}
