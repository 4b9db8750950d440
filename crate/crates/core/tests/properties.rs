use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ganz::baer_krull::{baer_krull_order, residue_order_catalog};
use ganz::certificates::{cone_value_at, generator_value, Certificate};
use ganz::instances;
use ganz::probe::{integrality_probe, SampleStrategy, DEFAULT_EPS_ORDERS};
use ganz::ratfunc::{parse_ratfunc, RatFunc};
use ganz::selftest::gen;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratfunc_display_parses_back(seed in any::<u64>(), n in 1usize..=3) {
        let f = gen::ratfunc(&mut rng(seed), n);
        let back = parse_ratfunc(&f.to_string()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn certificates_round_trip(seed in any::<u64>(), n in 1usize..=2, radical in any::<bool>()) {
        let mut r = rng(seed);
        let set = gen::set(&mut r, n);
        let c = if radical {
            let cert = gen::radical_cert(&mut r, &set);
            Certificate::Radical { set, cert }
        } else {
            let cert = gen::cone_cert(&mut r, set.p.len(), n);
            Certificate::Cone { set, cert }
        };
        let text = c.to_json();
        let back = Certificate::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back, c);
    }

    /// A verified radical certificate is never contradicted by probing.
    #[test]
    fn valid_radicals_survive_probing(seed in any::<u64>(), which in 0usize..4) {
        let (s, cert) = instances::radical(instances::VALID_RADICAL[which]);
        let strat = SampleStrategy::pseudorandom(seed, 60, DEFAULT_EPS_ORDERS.to_vec());
        let rep = integrality_probe(&cert.h, &s, &strat).unwrap();
        prop_assert!(!rep.is_violation(), "{:?}", rep.verdict);
    }

    /// The expanded generator and the blockwise value agree on 1/(1 + f).
    #[test]
    fn generator_matches_blockwise_value(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = ganz::certificates::SetDescription::parse("p: x1; 1 - x1", 1).unwrap();
        let cert = gen::cone_cert(&mut r, 2, 1);
        let g = generator_value(&cert, &s).unwrap();
        let b = gen::point(&mut r, 1);
        if let (Ok(f), Ok(gb)) = (cone_value_at(&cert, &s, &b), g.eval(b.coords())) {
            let one_plus = &ganz::ovf::KElem::one() + &f;
            prop_assert_eq!(&gb * &one_plus, ganz::ovf::KElem::one());
        }
    }

    #[test]
    fn constructed_orders_are_orders(seed in any::<u64>(), which in 0usize..2, pick in any::<prop::sample::Index>()) {
        let (_, ss) = instances::semisection_instances().swap_remove(which);
        let v = ss.valuation().clone();
        let catalog = residue_order_catalog(&v, 32);
        let ro = catalog[pick.index(catalog.len())].clone();
        let forced: Vec<RatFunc> = ss.forced().iter().map(|(_, p)| p.clone()).collect();
        let o = baer_krull_order(&v, ss, ro).unwrap();
        for p in &forced {
            prop_assert_eq!(o.sign(p).unwrap(), 1);
        }
        let mut r = rng(seed);
        let n = v.nvars();
        let f = gen::ratfunc(&mut r, n);
        let g = gen::ratfunc(&mut r, n);
        let (sf, sg) = (o.sign(&f).unwrap(), o.sign(&g).unwrap());
        prop_assert_eq!(o.sign(&f.mul(&g)).unwrap(), sf * sg);
        prop_assert_eq!(o.sign(&f.mul(&f)).unwrap(), 1);
        prop_assert_eq!(o.sign(&f.neg()).unwrap(), -sf);
        // positives are closed under addition
        if sf > 0 && sg > 0 {
            prop_assert_eq!(o.sign(&f.add(&g)).unwrap(), 1);
        }
    }
}
