//! The shipped instances: certificate files, semi-sections and pipeline inputs.

use crate::baer_krull::{build_semisection, SemiSection};
use crate::certificates::{Certificate, RadicalCert, SetDescription};
use crate::ovf::{KElem, ValGroupElem};
use crate::ratfunc::{parse_ratfunc, Point, RatFunc};
use crate::valuations::ValuationHandle;

pub const CERTIFICATE_FILES: &[(&str, &str)] = &[
    ("radical_inv_1px2", include_str!("../data/radical_inv_1px2.json")),
    ("radical_x_over_1px2", include_str!("../data/radical_x_over_1px2.json")),
    (
        "radical_unit_interval",
        include_str!("../data/radical_unit_interval.json"),
    ),
    ("radical_localized", include_str!("../data/radical_localized.json")),
    ("radical_invalid_x", include_str!("../data/radical_invalid_x.json")),
    ("cone_unit_interval", include_str!("../data/cone_unit_interval.json")),
];

/// Names of the shipped radical certificates that are expected to verify.
pub const VALID_RADICAL: &[&str] = &[
    "radical_inv_1px2",
    "radical_x_over_1px2",
    "radical_unit_interval",
    "radical_localized",
];

pub fn certificate(name: &str) -> Certificate {
    let (_, text) = CERTIFICATE_FILES
        .iter()
        .find(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("no shipped certificate `{name}`"));
    Certificate::from_json(text).unwrap_or_else(|e| panic!("shipped certificate `{name}` is malformed: {e}"))
}

pub fn radical(name: &str) -> (SetDescription, RadicalCert) {
    match certificate(name) {
        Certificate::Radical { set, cert } => (set, cert),
        Certificate::Cone { .. } => panic!("`{name}` is a cone certificate"),
    }
}

fn f(s: &str) -> RatFunc {
    parse_ratfunc(s).expect("shipped expression")
}

fn set(nvars: usize, ps: &[&str]) -> SetDescription {
    SetDescription::new(
        nvars,
        ps.iter().map(|p| f(p).to_poly().expect("polynomial")).collect(),
        vec![],
    )
}

pub fn near_origin() -> ValuationHandle {
    ValuationHandle::near_point(Point::new(vec![KElem::zero()]), Point::new(vec![KElem::one()]))
        .expect("valid direction")
}

/// One near-point and one weighted Gauss semi-section.
pub fn semisection_instances() -> Vec<(&'static str, SemiSection)> {
    let near = build_semisection(&near_origin(), vec![(ValGroupElem::new(vec![1, 0]), f("x1"))])
        .expect("independent parities");
    let gauss = build_semisection(
        &ValuationHandle::weighted_gauss(vec![1, 0]),
        vec![(ValGroupElem::scalar(1), f("x1 + eps*x2"))],
    )
    .expect("independent parities");
    vec![("near-point b=(0) d=(1)", near), ("weighted-gauss w=(1, 0)", gauss)]
}

/// Inputs of the sufficiency pipeline.
pub fn pipeline_instances() -> Vec<(&'static str, ValuationHandle, SetDescription)> {
    vec![
        (
            "a",
            ValuationHandle::weighted_gauss(vec![1]),
            set(1, &["x1", "x1^2 + eps^3"]),
        ),
        ("b", near_origin(), set(1, &["x1"])),
        (
            "c",
            ValuationHandle::weighted_gauss(vec![1, 0]),
            set(2, &["x1", "x2", "x1*x2"]),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::verify_radical_cert;

    #[test]
    fn shipped_files_parse_and_round_trip() {
        for (name, _) in CERTIFICATE_FILES {
            let c = certificate(name);
            assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c, "{name}");
        }
    }

    #[test]
    fn shipped_radicals_verify() {
        for name in VALID_RADICAL {
            let (s, cert) = radical(name);
            assert!(verify_radical_cert(&cert, &s).unwrap().is_valid(), "{name}");
        }
        let (s, cert) = radical("radical_invalid_x");
        assert!(!verify_radical_cert(&cert, &s).unwrap().is_valid());
    }
}
