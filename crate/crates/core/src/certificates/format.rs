//! The certificate file: one JSON document, UTF-8. Every expression is a
//! string in the ratfunc grammar. Subset indices are 1-based in files.
//!
//! ```json
//! {
//!   "version": 1,
//!   "nvars": 1,
//!   "set": { "p": ["x1", "-x1 + 1"], "g": [] },
//!   "kind": "cone",
//!   "cone": [ { "subset": [1, 2], "sos": ["1"] } ]
//! }
//! ```
//!
//! A radical certificate replaces `cone` by
//! `"radical": { "h": .., "generators": [[block..]..], "coeffs": [{ "poly": [{ "monomial": [..], "coeff": .. }..], "t_m": .., "t_a": [..] }..] }`.

use serde::{Deserialize, Serialize};

use super::{AlgebraElem, ConeCert, LocalizedElem, RadicalCert, SetDescription};
use crate::error::{Error, Result};
use crate::ovf::KElem;
use crate::ratfunc::{parse_kelem, parse_ratfunc, MPoly, Monomial, RatFunc};

pub const CERT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Cone { set: SetDescription, cert: ConeCert },
    Radical { set: SetDescription, cert: RadicalCert },
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Cone,
    Radical,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    version: u32,
    nvars: usize,
    set: SetDoc,
    kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cone: Option<Vec<BlockDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radical: Option<RadicalDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetDoc {
    p: Vec<String>,
    #[serde(default)]
    g: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    subset: Vec<usize>,
    sos: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RadicalDoc {
    h: String,
    #[serde(default)]
    generators: Vec<Vec<BlockDoc>>,
    coeffs: Vec<CoeffDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffDoc {
    poly: Vec<TermDoc>,
    #[serde(default = "zero_string")]
    t_m: String,
    #[serde(default)]
    t_a: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    monomial: Vec<u32>,
    coeff: String,
}

fn zero_string() -> String {
    "0".into()
}

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn cone_to_doc(cert: &ConeCert) -> Vec<BlockDoc> {
    cert.terms
        .iter()
        .map(|(subset, sos)| BlockDoc {
            subset: subset.iter().map(|i| i + 1).collect(),
            sos: sos.parts.iter().map(ToString::to_string).collect(),
        })
        .collect()
}

fn algebra_to_doc(a: &AlgebraElem) -> Vec<TermDoc> {
    a.poly
        .terms()
        .rev()
        .map(|(m, c)| TermDoc {
            monomial: m.exps().to_vec(),
            coeff: c.to_string(),
        })
        .collect()
}

struct Reader {
    nvars: usize,
}

impl Reader {
    fn expr(&self, text: &str, what: &str) -> Result<RatFunc> {
        let f = parse_ratfunc(text).map_err(|e| fmt_err(format!("{what} `{text}`: {e}")))?;
        if f.nvars() > self.nvars {
            return Err(fmt_err(format!(
                "{what} `{text}` uses x{} but nvars = {}",
                f.nvars(),
                self.nvars
            )));
        }
        Ok(f)
    }

    fn constant(&self, text: &str, what: &str) -> Result<KElem> {
        parse_kelem(text).map_err(|e| fmt_err(format!("{what} `{text}`: {e}")))
    }

    fn cone(&self, blocks: &[BlockDoc]) -> Result<ConeCert> {
        let mut cert = ConeCert::new();
        for b in blocks {
            let subset = b
                .subset
                .iter()
                .map(|&i| i.checked_sub(1).ok_or_else(|| fmt_err("subset indices start at 1")))
                .collect::<Result<Vec<_>>>()?;
            let parts = b
                .sos
                .iter()
                .map(|e| self.expr(e, "sos part"))
                .collect::<Result<Vec<_>>>()?;
            cert.push(subset, parts);
        }
        Ok(cert)
    }

    fn algebra(&self, terms: &[TermDoc]) -> Result<AlgebraElem> {
        let mut poly = MPoly::zero();
        for t in terms {
            let c = self.constant(&t.coeff, "coefficient")?;
            poly = poly.add(&MPoly::term(c, Monomial::new(t.monomial.clone())));
        }
        Ok(AlgebraElem::new(poly))
    }
}

impl Certificate {
    pub fn set(&self) -> &SetDescription {
        match self {
            Certificate::Cone { set, .. } | Certificate::Radical { set, .. } => set,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Cone { .. } => "cone",
            Certificate::Radical { .. } => "radical",
        }
    }

    pub fn to_json(&self) -> String {
        let set = self.set();
        let mut doc = Doc {
            version: CERT_VERSION,
            nvars: set.nvars,
            set: SetDoc {
                p: set.p.iter().map(ToString::to_string).collect(),
                g: set.g.iter().map(ToString::to_string).collect(),
            },
            kind: Kind::Cone,
            cone: None,
            radical: None,
        };
        match self {
            Certificate::Cone { cert, .. } => doc.cone = Some(cone_to_doc(cert)),
            Certificate::Radical { cert, .. } => {
                doc.kind = Kind::Radical;
                doc.radical = Some(RadicalDoc {
                    h: cert.h.to_string(),
                    generators: cert.generators.iter().map(cone_to_doc).collect(),
                    coeffs: cert
                        .coeffs
                        .iter()
                        .map(|c| CoeffDoc {
                            poly: algebra_to_doc(&c.a),
                            t_m: c.t_m.to_string(),
                            t_a: algebra_to_doc(&c.t_a),
                        })
                        .collect(),
                });
            }
        }
        let mut out = serde_json::to_string_pretty(&doc).expect("certificate documents serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        let doc: Doc = serde_json::from_str(text).map_err(|e| fmt_err(e.to_string()))?;
        if doc.version != CERT_VERSION {
            return Err(fmt_err(format!("unsupported version {}", doc.version)));
        }
        let r = Reader { nvars: doc.nvars };
        let p = doc
            .set
            .p
            .iter()
            .map(|e| {
                r.expr(e, "set polynomial")?
                    .to_poly()
                    .map_err(|_| fmt_err(format!("set entry `{e}` is not a polynomial")))
            })
            .collect::<Result<Vec<_>>>()?;
        let g = doc
            .set
            .g
            .iter()
            .map(|e| r.expr(e, "set generator"))
            .collect::<Result<Vec<_>>>()?;
        let set = SetDescription::new(doc.nvars, p, g);
        match (doc.kind, doc.cone, doc.radical) {
            (Kind::Cone, Some(blocks), None) => Ok(Certificate::Cone {
                cert: r.cone(&blocks)?,
                set,
            }),
            (Kind::Radical, None, Some(rad)) => {
                let generators = rad.generators.iter().map(|b| r.cone(b)).collect::<Result<Vec<_>>>()?;
                let coeffs = rad
                    .coeffs
                    .iter()
                    .map(|c| {
                        Ok(LocalizedElem {
                            a: r.algebra(&c.poly)?,
                            t_m: r.constant(&c.t_m, "t_m")?,
                            t_a: r.algebra(&c.t_a)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Certificate::Radical {
                    cert: RadicalCert {
                        h: r.expr(&rad.h, "h")?,
                        generators,
                        coeffs,
                    },
                    set,
                })
            }
            (Kind::Cone, ..) => Err(fmt_err("kind \"cone\" requires a `cone` field and no `radical` field")),
            (Kind::Radical, ..) => Err(fmt_err(
                "kind \"radical\" requires a `radical` field and no `cone` field",
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONE: &str = r#"{
  "version": 1,
  "nvars": 1,
  "set": { "p": ["x1", "1 - x1"] },
  "kind": "cone",
  "cone": [ { "subset": [1, 2], "sos": ["1"] } ]
}"#;

    #[test]
    fn parses_and_round_trips() {
        let c = Certificate::from_json(CONE).unwrap();
        let Certificate::Cone { set, cert } = &c else { panic!() };
        assert_eq!(set.p.len(), 2);
        assert_eq!(cert.terms.keys().next().unwrap(), &vec![0, 1]);
        let text = c.to_json();
        assert_eq!(Certificate::from_json(&text).unwrap(), c);
        assert_eq!(Certificate::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn rejects_bad_documents() {
        let unknown = CONE.replace("\"kind\"", "\"extra\": 1, \"kind\"");
        assert!(matches!(Certificate::from_json(&unknown), Err(Error::Format(_))));
        let version = CONE.replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(Certificate::from_json(&version), Err(Error::Format(_))));
        let zero = CONE.replace("[1, 2]", "[0, 2]");
        assert!(matches!(Certificate::from_json(&zero), Err(Error::Format(_))));
        let vars = CONE.replace("\"1\"]", "\"x2\"]");
        assert!(matches!(Certificate::from_json(&vars), Err(Error::Format(_))));
        let kind = CONE.replace("\"cone\",", "\"radical\",");
        assert!(matches!(Certificate::from_json(&kind), Err(Error::Format(_))));
        assert!(matches!(Certificate::from_json("not json"), Err(Error::Format(_))));
    }

    #[test]
    fn radical_round_trip() {
        let text = r#"{
  "version": 1, "nvars": 1, "set": { "p": [], "g": [] }, "kind": "radical",
  "radical": {
    "h": "x1/(1 + x1^2)",
    "generators": [[ { "subset": [], "sos": ["x1"] } ]],
    "coeffs": [
      { "poly": [ { "monomial": [2], "coeff": "1" }, { "monomial": [1], "coeff": "-1" } ], "t_m": "eps", "t_a": [] },
      { "poly": [] }
    ]
  }
}"#;
        let c = Certificate::from_json(text).unwrap();
        let Certificate::Radical { cert, .. } = &c else {
            panic!()
        };
        assert_eq!(cert.coeffs.len(), 2);
        assert_eq!(cert.coeffs[0].t_m, KElem::eps());
        assert!(cert.coeffs[1].t_m.is_zero());
        assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c);
    }
}
