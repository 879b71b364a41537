//! Element files: a versioned json document, plus the text and csv tables.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Algebra, AlgebraError, Element, Mode};
use crate::exact::{format_rational, Rational};

pub const ELEMENT_FORMAT: &str = "postlie-magnus/element";
pub const ELEMENT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SerializeError {
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported document: format '{format}' version {version}")]
    Format { format: String, version: u32 },
    #[error("unknown mode '{0}'")]
    Mode(String),
    #[error("bad coefficient {num}/{den}")]
    Coefficient { num: String, den: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct TermRecord {
    word: Vec<String>,
    num: String,
    den: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct ElementDocument {
    format: String,
    version: u32,
    mode: String,
    order: usize,
    terms: Vec<TermRecord>,
}

/// Pretty json with a trailing newline; terms in canonical order.
pub fn element_to_json(e: &Element) -> String {
    let doc = ElementDocument {
        format: ELEMENT_FORMAT.to_string(),
        version: ELEMENT_VERSION,
        mode: e.mode().as_str().to_string(),
        order: e.order(),
        terms: e
            .terms()
            .map(|(m, c)| TermRecord {
                word: m.word().iter().map(|t| t.encoding().to_string()).collect(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("document serializes") + "\n"
}

pub fn element_from_json(s: &str) -> Result<Element, SerializeError> {
    let doc: ElementDocument = serde_json::from_str(s)?;
    if doc.format != ELEMENT_FORMAT || doc.version != ELEMENT_VERSION {
        return Err(SerializeError::Format {
            format: doc.format,
            version: doc.version,
        });
    }
    let mode: Mode = doc
        .mode
        .parse()
        .map_err(|_| SerializeError::Mode(doc.mode.clone()))?;
    let alg = Algebra::new(mode, doc.order)?;
    let mut terms = Vec::with_capacity(doc.terms.len());
    for rec in doc.terms {
        let bad = || SerializeError::Coefficient {
            num: rec.num.clone(),
            den: rec.den.clone(),
        };
        let num: BigInt = rec.num.parse().map_err(|_| bad())?;
        let den: BigInt = rec.den.parse().map_err(|_| bad())?;
        if den == BigInt::from(0) {
            return Err(bad());
        }
        let word = alg.parse_word(&rec.word.join(" "))?;
        terms.push((word, Rational::new(num, den)));
    }
    Ok(alg.from_terms(terms))
}

/// One `coefficient<TAB>word` line per term; the zero element prints `0`.
pub fn element_to_text(e: &Element) -> String {
    if e.is_zero() {
        return "0\n".to_string();
    }
    let mut out = String::new();
    for (m, c) in e.terms() {
        out.push_str(&format_rational(c));
        out.push('\t');
        out.push_str(&m.to_text());
        out.push('\n');
    }
    out
}

pub fn element_to_csv(e: &Element) -> String {
    let mut out = String::from("coefficient,word\n");
    for (m, c) in e.terms() {
        out.push_str(&format!("{},\"{}\"\n", format_rational(c), m.to_text()));
    }
    out
}
