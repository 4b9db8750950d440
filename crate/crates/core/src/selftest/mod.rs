//! The acceptance suite: eleven exact property checks over seeded random
//! inputs and the shipped instances. Shared by `ganz selftest` and the
//! `acceptance` test target.

pub mod gen;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baer_krull::{
    baer_krull_order, build_semisection, build_semisection_with_base, sufficiency_pipeline, OrderHandle,
    PipelineOutcome, ResidueOrder,
};
use crate::certificates::{
    cone_value, cone_value_at, generator_value, handelman_search, verify_radical_cert, AlgebraElem, Certificate,
    HandelmanOutcome, RadicalVerdict, SetDescription,
};
use crate::error::Error;
use crate::instances;
use crate::ovf::{KElem, ValGroupElem, Value};
use crate::probe::{integrality_probe, sample_set, SampleStrategy, Verdict, DEFAULT_EPS_ORDERS};
use crate::ratfunc::{parse_ratfunc, MPoly, Monomial, Point, RatFunc};
use crate::valuations::{near_val_with_retry, substitution_order_sign, ValuationHandle};

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "OVF axioms in K"),
    (2, "near-point conformance"),
    (3, "substitution order positivity"),
    (4, "cone generators are integral"),
    (5, "radical verifier and perturbations"),
    (6, "semi-section laws"),
    (7, "Baer-Krull order laws"),
    (8, "sufficiency pipeline"),
    (9, "certificates agree with probing"),
    (10, "Handelman search round trip"),
    (11, "serialization and reproducible output"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {status}  {}: {}", self.id, self.name, self.detail)
    }
}

/// Counts checks and keeps the first failure message.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(msg());
            }
        }
    }

    fn fail(&mut self, msg: String) {
        self.check(false, || msg);
    }

    fn finish(self, what: &str) -> (bool, String) {
        let mut detail = format!("{} {what}, {} failures", self.checks, self.failures);
        if let Some(m) = self.first {
            detail.push_str(&format!("; first: {m}"));
        }
        (self.failures == 0 && self.checks > 0, detail)
    }
}

fn rng(id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x9a4e_5eed_0000 + u64::from(id))
}

fn f(s: &str) -> RatFunc {
    parse_ratfunc(s).expect("built-in expression")
}

fn criterion_1() -> (bool, String) {
    let mut r = rng(1);
    let mut t = Tally::default();
    let mut pairs = 0;
    while pairs < 10_000 {
        let x = gen::kelem(&mut r).abs();
        let y = gen::kelem(&mut r).abs();
        let (x, y) = match x.cmp_order(&y) {
            std::cmp::Ordering::Less => (x, y),
            std::cmp::Ordering::Greater => (y, x),
            std::cmp::Ordering::Equal => continue,
        };
        pairs += 1;
        t.check(x.val() >= y.val(), || format!("0 < {x} < {y} but nu({x}) < nu({y})"));
    }
    for _ in 0..10_000 {
        let a = gen::kelem(&mut r);
        let b = if r.gen_bool(0.2) { -&a } else { gen::kelem(&mut r) };
        let s = &a + &b;
        let min = a.val().min(b.val());
        let ok = if a.val() != b.val() {
            s.val() == min
        } else {
            s.val() >= min
        };
        t.check(ok, || format!("nu({a} + {b}) = {} against min {min}", s.val()));
    }
    t.finish("checks")
}

fn criterion_2() -> (bool, String) {
    let mut r = rng(2);
    let mut t = Tally::default();
    let mut vanishing = 0;
    while vanishing < 500 {
        let n = r.gen_range(1..=2);
        let b = gen::point(&mut r, n);
        let mut num = MPoly::zero();
        for i in 0..n {
            let lin = MPoly::var(i).sub(&MPoly::constant(b.coords()[i].clone()));
            num = num.add(&lin.mul(&gen::mpoly(&mut r, n, 1, 2)));
        }
        let den = if r.gen_bool(0.5) {
            MPoly::one()
        } else {
            gen::mpoly(&mut r, n, 2, 2)
        };
        if num.is_zero() || den.eval(b.coords()).map_or(true, |v| v.is_zero()) {
            continue;
        }
        let fx = RatFunc::new(num, den).expect("nonzero denominator");
        vanishing += 1;
        match near_val_with_retry(&b, &fx, 1, 32) {
            Ok((_, Value::Finite(g))) => t.check(g.coords()[0] >= 1, || format!("{fx} at {b}: value {g}")),
            Ok((_, Value::Infinity)) => t.fail(format!("{fx} got infinite value")),
            Err(e) => t.fail(format!("{fx} at {b}: {e}")),
        }
    }
    let mut nonvanishing = 0;
    while nonvanishing < 500 {
        let n = r.gen_range(1..=2);
        let b = gen::point(&mut r, n);
        let fx = gen::ratfunc(&mut r, n);
        let Ok(at) = fx.eval(b.coords()) else { continue };
        if at.is_zero() {
            continue;
        }
        nonvanishing += 1;
        let want = Value::Finite(ValGroupElem::new(vec![0, at.ord().expect("nonzero")]));
        match near_val_with_retry(&b, &fx, 1, 32) {
            Ok((_, v)) => t.check(v == want, || format!("{fx} at {b}: value {v}, expected {want}")),
            Err(e) => t.fail(format!("{fx} at {b}: {e}")),
        }
    }
    t.finish("functions")
}

fn criterion_3() -> (bool, String) {
    let mut r = rng(3);
    let mut t = Tally::default();
    let mut done = 0;
    while done < 500 {
        let n = r.gen_range(1..=3);
        let p = gen::mpoly(&mut r, n, 3, 4);
        let b = gen::point(&mut r, n);
        let d = gen::direction(&mut r, n);
        let at = p.eval(b.coords()).expect("dimension matches");
        if at.is_zero() {
            continue;
        }
        let p = if at.sign() < 0 { p.neg() } else { p };
        done += 1;
        let fx = RatFunc::from_poly(p);
        match substitution_order_sign(&b, &d, &fx) {
            Ok(s) => t.check(s == 1, || format!("{fx} at {b} along {d}: sign {s}")),
            Err(e) => t.fail(format!("{fx} at {b} along {d}: {e}")),
        }
    }
    t.finish("triples")
}

fn first_points(s: &SetDescription, seed: u64, want: usize) -> Vec<Point> {
    let mut count = 4 * want;
    loop {
        let strat = SampleStrategy::pseudorandom(seed, count, DEFAULT_EPS_ORDERS.to_vec());
        let sample = sample_set(s, &strat).expect("dimension matches");
        if sample.points.len() >= want || count >= crate::probe::MAX_POINTS {
            return sample.points.into_iter().take(want).collect();
        }
        count *= 2;
    }
}

fn criterion_4() -> (bool, String) {
    let mut r = rng(4);
    let mut t = Tally::default();
    let sets = [
        SetDescription::parse("p: x1; 1 - x1", 1).expect("set"),
        SetDescription::parse("p: x1; x2; 1 - x1 - x2", 2).expect("set"),
    ];
    for (k, s) in sets.iter().enumerate() {
        let points = first_points(s, 40 + k as u64, 100);
        if points.len() < 100 {
            t.fail(format!("only {} points sampled in {s}", points.len()));
            continue;
        }
        for c in 0..100 {
            let cert = gen::cone_cert(&mut r, s.p.len(), s.nvars);
            // the expanded generator is costly; cross-check it on a few certificates
            let g = if c < 10 {
                match generator_value(&cert, s) {
                    Ok(g) => Some(g),
                    Err(e) => {
                        t.fail(format!("generator: {e}"));
                        continue;
                    }
                }
            } else {
                None
            };
            for (j, b) in points.iter().enumerate() {
                let v = match cone_value_at(&cert, s, b) {
                    Ok(f) => match (&KElem::one() + &f).inv() {
                        Ok(v) => v,
                        Err(e) => {
                            t.fail(format!("1 + f vanishes at {b}: {e}"));
                            continue;
                        }
                    },
                    Err(Error::NotDefinedAt | Error::Indeterminate) => continue,
                    Err(e) => {
                        t.fail(format!("cone value at {b}: {e}"));
                        continue;
                    }
                };
                t.check(v.ord().is_none_or(|k| k >= 0), || format!("1/(1+f) at {b} is {v}"));
                if let Some(g) = g.as_ref().filter(|_| j < 2) {
                    match g.eval(b.coords()) {
                        Ok(w) => t.check(w == v, || format!("{g} at {b}: expanded {w}, blockwise {v}")),
                        Err(Error::NotDefinedAt | Error::Indeterminate) => {}
                        Err(e) => t.fail(format!("{g} at {b}: {e}")),
                    }
                }
            }
        }
    }
    t.finish("evaluations")
}

fn criterion_5() -> (bool, String) {
    let mut r = rng(5);
    let mut t = Tally::default();
    let (s, cert) = instances::radical("radical_x_over_1px2");
    match verify_radical_cert(&cert, &s) {
        Ok(v) => t.check(v.is_valid(), || format!("shipped certificate: {v:?}")),
        Err(e) => t.fail(format!("shipped certificate: {e}")),
    }
    for _ in 0..20 {
        let mut bad = cert.clone();
        let i = r.gen_range(0..bad.coeffs.len());
        let c = &KElem::from_rat(gen::nonzero_rational(&mut r, 5)) * &KElem::eps_pow(r.gen_range(1..=3));
        let mono = Monomial::new(vec![r.gen_range(0..=2)]);
        let a = &bad.coeffs[i].a;
        bad.coeffs[i].a = AlgebraElem::new(a.poly.add(&MPoly::term(c.clone(), mono.clone())));
        match verify_radical_cert(&bad, &s) {
            Ok(RadicalVerdict::Invalid { residual }) => {
                t.check(!residual.is_zero(), || "zero residual reported as invalid".into())
            }
            Ok(RadicalVerdict::Valid) => t.fail(format!("perturbation {c}*[{mono}] of c{i} still valid")),
            Err(e) => t.fail(format!("perturbation {c}*[{mono}] of c{i}: {e}")),
        }
    }
    t.finish("verifications")
}

fn random_gamma(r: &mut ChaCha8Rng, rank: usize) -> ValGroupElem {
    ValGroupElem::new((0..rank).map(|_| r.gen_range(-6..=6)).collect())
}

fn criterion_6() -> (bool, String) {
    let mut r = rng(6);
    let mut t = Tally::default();
    for (name, s) in instances::semisection_instances() {
        let rank = s.valuation().rank();
        for _ in 0..200 {
            let g1 = random_gamma(&mut r, rank);
            let g2 = random_gamma(&mut r, rank);
            match s.check_law(&g1, &g2) {
                Ok(ok) => t.check(ok, || format!("{name}: law fails for {g1}, {g2}")),
                Err(e) => t.fail(format!("{name}: {e}")),
            }
        }
        for i in 0..s.forced().len() {
            match s.check_forcing(i) {
                Ok(ok) => t.check(ok, || format!("{name}: forcing witness {i} fails")),
                Err(e) => t.fail(format!("{name}: {e}")),
            }
        }
    }
    t.finish("checks")
}

/// Orders from the pipeline instances plus two `eps`-adic orders on `K`.
pub fn constructed_orders() -> Vec<(String, OrderHandle)> {
    let mut out = Vec::new();
    for (name, v, s) in instances::pipeline_instances() {
        if let Ok(PipelineOutcome::Order(rep)) = sufficiency_pipeline(&v, &s, &[]) {
            out.push((format!("pipeline ({name})"), rep.order));
        }
    }
    let k = ValuationHandle::weighted_gauss(vec![]);
    let plain = build_semisection(&k, vec![]).expect("no forced pairs");
    let twisted = build_semisection_with_base(&k, vec![], vec![f("-eps")]).expect("valuation 1");
    out.push((
        "eps-adic".into(),
        baer_krull_order(&k, plain, ResidueOrder::StandardQ).expect("same valuation"),
    ));
    out.push((
        "eps-adic, s(1) = -eps".into(),
        baer_krull_order(&k, twisted, ResidueOrder::StandardQ).expect("same valuation"),
    ));
    out
}

fn order_laws(o: &OrderHandle, fx: &RatFunc, gx: &RatFunc, t: &mut Tally, name: &str) -> crate::error::Result<()> {
    let v = o.valuation();
    let sf = o.sign(fx)?;
    let sg = o.sign(gx)?;
    let sfg = o.sign(&fx.mul(gx))?;
    t.check(sfg == sf * sg, || {
        format!("{name}: sign({fx} * {gx}) = {sfg}, factors {sf}, {sg}")
    });
    t.check(sf.abs() == 1 && o.sign(&fx.neg())? == -sf, || {
        format!("{name}: trichotomy fails for {fx}")
    });
    if sf == 1 && sg == 1 {
        let s = o.sign(&fx.add(gx))?;
        t.check(s == 1, || format!("{name}: {fx} + {gx} not positive"));
    }
    let zero = Value::Finite(ValGroupElem::zero(v.rank()));
    let Value::Finite(gamma) = v.val_of(fx)? else {
        unreachable!("f is nonzero")
    };
    let unit = fx.div(&o.semisection.section(&gamma))?;
    for u in [fx, &unit] {
        if v.val_of(u)? == zero {
            let rs = o.residue_order.sign(&v.residue(u)?)?;
            let s = o.sign(u)?;
            t.check(s == rs, || format!("{name}: sign({u}) = {s} but residue sign {rs}"));
        }
    }
    let a = if sf < 0 { fx.neg() } else { fx.clone() };
    let b = if sg < 0 { gx.neg() } else { gx.clone() };
    let (a, b) = match o.sign(&b.sub(&a))? {
        1 => (a, b),
        -1 => (b, a),
        _ => return Ok(()),
    };
    let (va, vb) = (v.val_of(&a)?, v.val_of(&b)?);
    t.check(va >= vb, || format!("{name}: 0 < {a} < {b} but nu = {va} < {vb}"));
    Ok(())
}

fn criterion_7() -> (bool, String) {
    let mut r = rng(7);
    let mut t = Tally::default();
    for (name, o) in constructed_orders() {
        let n = o.valuation().nvars();
        for _ in 0..1000 {
            let fx = gen::ratfunc(&mut r, n);
            let gx = gen::ratfunc(&mut r, n);
            if let Err(e) = order_laws(&o, &fx, &gx, &mut t, &name) {
                t.fail(format!("{name}: {e} on {fx}, {gx}"));
            }
        }
    }
    t.finish("checks")
}

fn criterion_8() -> (bool, String) {
    let mut t = Tally::default();
    for (name, v, s) in instances::pipeline_instances() {
        match sufficiency_pipeline(&v, &s, &[]) {
            Ok(PipelineOutcome::Order(rep)) => {
                for (i, p) in s.p.iter().enumerate() {
                    let sign = rep.order.sign(&RatFunc::from_poly(p.clone()));
                    t.check(sign == Ok(1), || format!("({name}) sign(p{}) = {sign:?}", i + 1));
                }
            }
            Ok(PipelineOutcome::NotFound { residues }) => t.fail(format!("({name}) no residue order: {residues:?}")),
            Err(e) => t.fail(format!("({name}) {e}")),
        }
    }
    t.finish("signs")
}

fn criterion_9() -> (bool, String) {
    let mut t = Tally::default();
    for name in instances::VALID_RADICAL {
        let (s, cert) = instances::radical(name);
        let mut count = 500;
        let report = loop {
            let strat = SampleStrategy::pseudorandom(9, count, DEFAULT_EPS_ORDERS.to_vec());
            match integrality_probe(&cert.h, &s, &strat) {
                Ok(rep) if rep.tested + rep.skipped_undefined >= 500 || rep.is_violation() => break Ok(rep),
                Ok(_) if count < crate::probe::MAX_POINTS => count *= 2,
                Ok(rep) => break Ok(rep),
                Err(e) => break Err(e),
            }
        };
        match report {
            Ok(rep) => {
                t.check(rep.tested + rep.skipped_undefined >= 500, || {
                    format!("{name}: only {} points", rep.tested)
                });
                t.check(!rep.is_violation(), || format!("{name}: {:?}", rep.verdict));
            }
            Err(e) => t.fail(format!("{name}: {e}")),
        }
    }
    let h = f("1/x1");
    let s = SetDescription::parse("p: x1", 1).expect("set");
    let strat = SampleStrategy::pseudorandom(7, 200, DEFAULT_EPS_ORDERS.to_vec());
    match (integrality_probe(&h, &s, &strat), integrality_probe(&h, &s, &strat)) {
        (Ok(a), Ok(b)) => {
            t.check(a == b, || "probe is not reproducible".into());
            match &a.verdict {
                Verdict::Violation { witness, value, val } => {
                    let inside = s.contains(witness.coords()) == Ok(true);
                    let same = h.eval(witness.coords()).as_ref() == Ok(value) && value.ord() == Some(*val) && *val < 0;
                    t.check(inside && same, || format!("witness {witness} does not re-check"));
                }
                Verdict::NoViolationFound => t.fail("no violation for 1/x1 within 200 samples".into()),
            }
        }
        (Err(e), _) | (_, Err(e)) => t.fail(format!("1/x1: {e}")),
    }
    t.finish("checks")
}

fn criterion_10() -> (bool, String) {
    let mut t = Tally::default();
    let s = SetDescription::parse("p: x1; 1 - x1", 1).expect("set");
    let target = f("x1 - x1^2").to_poly().expect("polynomial");
    match handelman_search(&s, &target, 2) {
        Ok(HandelmanOutcome::Found(cert)) => {
            let v = cone_value(&cert, &s);
            t.check(v == Ok(RatFunc::from_poly(target.clone())), || {
                format!("cone value {v:?}")
            });
        }
        other => t.fail(format!("x1 - x1^2: {other:?}")),
    }
    let s = SetDescription::parse("p: x1", 1).expect("set");
    let target = f("-x1").to_poly().expect("polynomial");
    for bound in 1..=4 {
        let out = handelman_search(&s, &target, bound);
        t.check(out == Ok(HandelmanOutcome::Unknown), || {
            format!("-x1 at bound {bound}: {out:?}")
        });
    }
    t.finish("searches")
}

fn criterion_11() -> (bool, String) {
    let mut r = rng(11);
    let mut t = Tally::default();
    for k in 0..200 {
        let n = r.gen_range(1..=2);
        let set = gen::set(&mut r, n);
        let c = if k % 2 == 0 {
            Certificate::Cone {
                cert: gen::cone_cert(&mut r, set.p.len(), n),
                set,
            }
        } else {
            let cert = gen::radical_cert(&mut r, &set);
            Certificate::Radical { set, cert }
        };
        let text = c.to_json();
        match Certificate::from_json(&text) {
            Ok(back) => {
                t.check(back == c, || format!("round trip changed:\n{text}"));
                t.check(back.to_json() == text, || {
                    format!("second serialization differs:\n{text}")
                });
            }
            Err(e) => t.fail(format!("{e} in\n{text}")),
        }
    }
    let runs: [&[&str]; 3] = [
        &[
            "ganz",
            "probe-integrality",
            "--h",
            "1/x1",
            "--set",
            "p: x1",
            "--seed",
            "7",
            "--count",
            "200",
        ],
        &["ganz", "order-pipeline", "--set", "p: x1; x2; x1*x2", "--w", "1,0"],
        &[
            "ganz",
            "cone-search",
            "--set",
            "p: x1; 1 - x1",
            "--h",
            "x1 - x1^2",
            "--degree-bound",
            "2",
        ],
    ];
    for args in runs {
        let a = crate::cli::run(args.iter().map(|s| s.to_string()));
        let b = crate::cli::run(args.iter().map(|s| s.to_string()));
        t.check(a == b && !a.1.is_empty(), || {
            format!("`{}` output differs between runs", args.join(" "))
        });
    }
    t.finish("checks")
}

pub fn run_criterion(id: u8) -> CriterionResult {
    let (passed, detail) = match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        _ => panic!("no criterion {id}"),
    };
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .expect("known id");
    CriterionResult {
        id,
        name,
        passed,
        detail,
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id)).collect()
}
