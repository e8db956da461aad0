//! Code-set documents and their JSON and text-table encodings.
//!
//! The JSON form is
//! `{"q":..,"m":..,"k":..,"l":..,"sets":[[[e, ..], ..], ..],"metadata":{..}}`
//! where `sets[k][m]` is the exponent sequence of row m of code k.
//!
//! The text form starts with a header `# q=3 M=3 K=6 L=6` (optionally
//! followed by `Z=3`), then K blocks separated by blank lines, each holding
//! M lines of L space-separated exponents. Binary sets may instead spell
//! each line as a `+`/`-` string.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::check_modulus;
use crate::error::{Error, Result};
use crate::polymat::{CodeGrid, PolyMatrix};

/// Provenance attached to a document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_z: Option<usize>,
}

impl Metadata {
    fn is_empty(&self) -> bool {
        self.construction.is_none() && self.claimed_z.is_none()
    }
}

/// A unimodular code set: K codes of M sequences of length L over ω_q.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSetDocument {
    pub q: u32,
    pub m: usize,
    pub k: usize,
    pub l: usize,
    pub sets: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

/// Output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Table,
    /// Text table with `+`/`-` rows; binary sets only.
    Signs,
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        line: None,
        field: field.into(),
        message: message.into(),
    }
}

impl CodeSetDocument {
    /// Checks dimensions and exponent ranges, reporting the offending field path.
    pub fn validate(&self) -> Result<()> {
        check_modulus(self.q as u64).map_err(|e| field_error("q", e.to_string()))?;
        for (name, v) in [("m", self.m), ("k", self.k), ("l", self.l)] {
            if v == 0 {
                return Err(field_error(name, "must be positive"));
            }
        }
        if self.sets.len() != self.k {
            return Err(field_error(
                "sets",
                format!("holds {} codes, expected k={}", self.sets.len(), self.k),
            ));
        }
        for (ki, code) in self.sets.iter().enumerate() {
            if code.len() != self.m {
                return Err(field_error(
                    format!("sets[{ki}]"),
                    format!("holds {} sequences, expected m={}", code.len(), self.m),
                ));
            }
            for (mi, seq) in code.iter().enumerate() {
                if seq.len() != self.l {
                    return Err(field_error(
                        format!("sets[{ki}][{mi}]"),
                        format!("has length {}, expected l={}", seq.len(), self.l),
                    ));
                }
                if let Some(li) = seq.iter().position(|&e| e >= self.q) {
                    return Err(field_error(
                        format!("sets[{ki}][{mi}][{li}]"),
                        format!("exponent {} is not below q={}", seq[li], self.q),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn from_grid(grid: &CodeGrid) -> Self {
        let sets = (0..grid.cols)
            .map(|k| {
                (0..grid.rows)
                    .map(|m| grid.sequence(m, k).to_vec())
                    .collect()
            })
            .collect();
        Self {
            q: grid.modulus,
            m: grid.rows,
            k: grid.cols,
            l: grid.length,
            sets,
            metadata: Metadata::default(),
        }
    }

    pub fn from_matrix(x: &PolyMatrix) -> Result<Self> {
        Ok(Self::from_grid(&x.to_time_domain()?))
    }

    pub fn to_grid(&self) -> Result<CodeGrid> {
        self.validate()?;
        let exps = self.sets.iter().flatten().flatten().copied().collect();
        CodeGrid::new(self.q, self.m, self.k, self.l, exps)
    }

    pub fn to_matrix(&self) -> Result<PolyMatrix> {
        PolyMatrix::from_time_domain(&self.to_grid()?)
    }

    pub fn with_claimed_z(mut self, z: Option<usize>) -> Self {
        self.metadata.claimed_z = z;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: Some(e.line()),
            field: "json".into(),
            message: e.to_string(),
        })?;
        doc.validate()?;
        Ok(doc)
    }

    /// Text table; `signs` spells binary rows as `+`/`-` strings.
    pub fn to_table(&self, signs: bool) -> Result<String> {
        if signs && self.q != 2 {
            return Err(Error::InvalidArgument(format!(
                "sign format needs q=2, document has q={}",
                self.q
            )));
        }
        let mut out = format!("# q={} M={} K={} L={}", self.q, self.m, self.k, self.l);
        if let Some(z) = self.metadata.claimed_z {
            write!(out, " Z={z}").unwrap();
        }
        out.push('\n');
        for (ki, code) in self.sets.iter().enumerate() {
            if ki > 0 {
                out.push('\n');
            }
            for seq in code {
                let line = if signs {
                    seq.iter()
                        .map(|&e| if e == 0 { '+' } else { '-' })
                        .collect::<String>()
                } else {
                    seq.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
                };
                out.push_str(&line);
                out.push('\n');
            }
        }
        Ok(out)
    }

    /// Parses the text table, detecting sign rows automatically.
    pub fn from_table(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (hline, header) = lines
            .by_ref()
            .find(|(_, l)| !l.is_empty())
            .ok_or_else(|| field_error("header", "empty input"))?;
        let header = parse_header(hline, header)?;
        let mut blocks: Vec<Vec<Vec<u32>>> = Vec::new();
        let mut current: Vec<Vec<u32>> = Vec::new();
        for (n, line) in lines {
            if line.starts_with('#') {
                continue;
            }
            if line.is_empty() {
                if !current.is_empty() {
                    blocks.push(std::mem::take(&mut current));
                }
                continue;
            }
            let field = format!("sets[{}][{}]", blocks.len(), current.len());
            current.push(parse_row(n, &field, line, header.q)?);
        }
        if !current.is_empty() {
            blocks.push(current);
        }
        let doc = Self {
            q: header.q,
            m: header.m,
            k: header.k,
            l: header.l,
            sets: blocks,
            metadata: Metadata {
                construction: None,
                claimed_z: header.z,
            },
        };
        doc.validate()?;
        Ok(doc)
    }

    /// Parses JSON or a text table, chosen by the first non-blank character.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_table(text)
        }
    }

    pub fn emit(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json() + "\n"),
            Format::Table => self.to_table(false),
            Format::Signs => self.to_table(true),
        }
    }
}

struct Header {
    q: u32,
    m: usize,
    k: usize,
    l: usize,
    z: Option<usize>,
}

fn parse_header(line: usize, text: &str) -> Result<Header> {
    let err = |field: &str, message: String| Error::Parse {
        line: Some(line),
        field: field.to_string(),
        message,
    };
    let body = text.strip_prefix('#').ok_or_else(|| {
        err(
            "header",
            format!("expected '# q=.. M=.. K=.. L=..', found {text:?}"),
        )
    })?;
    let (mut q, mut m, mut k, mut l, mut z) = (None, None, None, None, None);
    for token in body.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| err("header", format!("expected key=value, found {token:?}")))?;
        let parsed: usize = value
            .parse()
            .map_err(|_| err(key, format!("{value:?} is not a non-negative integer")))?;
        let slot = match key {
            "q" => &mut q,
            "M" => &mut m,
            "K" => &mut k,
            "L" => &mut l,
            "Z" => &mut z,
            other => return Err(err("header", format!("unknown key {other:?}"))),
        };
        *slot = Some(parsed);
    }
    let need =
        |v: Option<usize>, key: &str| v.ok_or_else(|| err(key, "missing from header".into()));
    Ok(Header {
        q: need(q, "q")? as u32,
        m: need(m, "M")?,
        k: need(k, "K")?,
        l: need(l, "L")?,
        z,
    })
}

fn parse_row(line: usize, field: &str, text: &str, q: u32) -> Result<Vec<u32>> {
    let err_at = |field: String, message: String| Error::Parse {
        line: Some(line),
        field,
        message,
    };
    let err = |message: String| err_at(field.to_string(), message);
    let compact: String = text.split_whitespace().collect();
    if compact.chars().all(|c| c == '+' || c == '-') {
        if q != 2 {
            return Err(err(format!("sign rows need q=2, header has q={q}")));
        }
        return Ok(compact.chars().map(|c| u32::from(c == '-')).collect());
    }
    text.split_whitespace()
        .enumerate()
        .map(|(i, t)| {
            let e = t
                .parse::<u32>()
                .map_err(|_| err(format!("{t:?} is not a non-negative integer exponent")))?;
            if e >= q {
                return Err(err_at(
                    format!("{field}[{i}]"),
                    format!("exponent {e} is not below q={q}"),
                ));
            }
            Ok(e)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EQ52: &str =
        "# q=2 M=2 K=4 L=4 Z=2\n++++\n+-+-\n\n+-+-\n++++\n\n++--\n+--+\n\n+--+\n++--\n";

    #[test]
    fn signs_and_exponents_agree() {
        let signs = CodeSetDocument::from_table(EQ52).unwrap();
        let table = signs.to_table(false).unwrap();
        assert!(table.starts_with("# q=2 M=2 K=4 L=4 Z=2\n0 0 0 0\n0 1 0 1\n"));
        assert_eq!(CodeSetDocument::from_table(&table).unwrap(), signs);
        assert_eq!(signs.to_table(true).unwrap(), EQ52);
        assert_eq!(signs.metadata.claimed_z, Some(2));
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = CodeSetDocument::from_table("# q=2 M=1 K=1 L=2\n0 x\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: Some(2),
                field: "sets[0][0]".into(),
                message: "\"x\" is not a non-negative integer exponent".into()
            }
        );
        let err = CodeSetDocument::from_table("# q=3 M=1 K=1 L=2\n0 3\n").unwrap_err();
        assert!(err.to_string().contains("line 2: sets[0][0][1]"), "{err}");
        let err = CodeSetDocument::from_table("# q=3 M=1 K=1\n0 1\n").unwrap_err();
        assert!(err.to_string().contains("L: missing"), "{err}");
        let err = CodeSetDocument::from_table("# q=3 M=1 K=1 L=2\n+-\n").unwrap_err();
        assert!(err.to_string().contains("need q=2"), "{err}");
        let err =
            CodeSetDocument::from_json(r#"{"q":2,"m":1,"k":1,"l":2,"sets":[[[0]]]}"#).unwrap_err();
        assert!(
            err.to_string().contains("sets[0][0]: has length 1"),
            "{err}"
        );
        let err = CodeSetDocument::from_json("{\"q\":2,\n\"m\":}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: Some(2), .. }), "{err}");
    }

    #[test]
    fn sign_format_requires_binary() {
        let doc = CodeSetDocument::from_table("# q=3 M=1 K=1 L=2\n0 2\n").unwrap();
        assert!(doc.to_table(true).is_err());
    }

    #[test]
    fn json_keys_are_lowercase() {
        let doc = CodeSetDocument::from_table(EQ52).unwrap();
        let v: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, vec!["k", "l", "m", "metadata", "q", "sets"]);
    }

    fn arb_doc() -> impl Strategy<Value = CodeSetDocument> {
        (
            prop::sample::select(vec![2u32, 3, 4, 6, 12]),
            1usize..4,
            1usize..4,
            1usize..10,
            prop::option::of(1usize..10),
        )
            .prop_flat_map(|(q, m, k, l, z)| {
                prop::collection::vec(prop::collection::vec(prop::collection::vec(0..q, l), m), k)
                    .prop_map(move |sets| CodeSetDocument {
                        q,
                        m,
                        k,
                        l,
                        sets,
                        metadata: Metadata {
                            construction: None,
                            claimed_z: z,
                        },
                    })
            })
    }

    proptest! {
        #[test]
        fn round_trips(doc in arb_doc()) {
            prop_assert_eq!(&CodeSetDocument::parse(&doc.to_json()).unwrap(), &doc);
            prop_assert_eq!(&CodeSetDocument::parse(&doc.to_table(false).unwrap()).unwrap(), &doc);
            if doc.q == 2 {
                prop_assert_eq!(&CodeSetDocument::parse(&doc.to_table(true).unwrap()).unwrap(), &doc);
            }
            let via_matrix = CodeSetDocument::from_matrix(&doc.to_matrix().unwrap()).unwrap();
            prop_assert_eq!(via_matrix.sets, doc.sets.clone());
        }
    }
}
