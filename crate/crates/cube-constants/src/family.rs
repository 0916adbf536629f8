//! Family files and the command-line shorthand.
//!
//! A family file is JSON of the form
//! `{"kind": "explicit", "N": 4, "sets": [[1, 2], [3]]}` with `kind` one of
//! `explicit`, `homogeneous`, `upto`, `prime-singletons`, `squarefree`;
//! `d` is required for `homogeneous` and `upto`. Sets are 1-based. For a
//! generated kind, `sets` may be present and must then match the
//! construction.

use std::path::Path;

use cube_constants_core::{make_family, FamilyKind, FamilySpec, SupportFamily};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub kind: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sets: Option<Vec<Vec<usize>>>,
}

fn kind_name(kind: FamilyKind) -> &'static str {
    match kind {
        FamilyKind::Explicit => "explicit",
        FamilyKind::Homogeneous(_) => "homogeneous",
        FamilyKind::UpTo(_) => "upto",
        FamilyKind::PrimeSingletons => "prime-singletons",
        FamilyKind::SquareFree => "squarefree",
    }
}

fn kind_degree(kind: FamilyKind) -> Option<usize> {
    match kind {
        FamilyKind::Homogeneous(d) | FamilyKind::UpTo(d) => Some(d),
        _ => None,
    }
}

impl FamilyFile {
    /// Materialized description of a family (sets always listed).
    pub fn from_family(family: &SupportFamily) -> Self {
        FamilyFile {
            kind: kind_name(family.kind()).to_string(),
            n: family.dim(),
            d: kind_degree(family.kind()),
            sets: Some(family.index_lists()),
        }
    }

    pub fn spec(&self) -> Result<FamilySpec, CliError> {
        let need_d = || {
            self.d
                .ok_or_else(|| CliError::Family(format!("kind {:?} needs \"d\"", self.kind)))
        };
        let n = self.n;
        Ok(match self.kind.as_str() {
            "explicit" => FamilySpec::Explicit {
                n,
                sets: self
                    .sets
                    .clone()
                    .ok_or_else(|| CliError::Family("kind \"explicit\" needs \"sets\"".into()))?,
            },
            "homogeneous" => FamilySpec::Homogeneous { n, d: need_d()? },
            "upto" => FamilySpec::UpTo { n, d: need_d()? },
            "prime-singletons" => FamilySpec::PrimeSingletons { n },
            "squarefree" => FamilySpec::SquareFree { n },
            other => return Err(CliError::Family(format!("unknown kind {other:?}"))),
        })
    }

    pub fn build(&self) -> Result<SupportFamily, CliError> {
        for set in self.sets.iter().flatten() {
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CliError::Family(format!("set {set:?} is not strictly increasing")));
            }
        }
        let family = make_family(&self.spec()?)?;
        if self.kind != "explicit" {
            if let Some(sets) = &self.sets {
                let given = make_family(&FamilySpec::Explicit {
                    n: self.n,
                    sets: sets.clone(),
                })?;
                if given.sets() != family.sets() {
                    return Err(CliError::Family(format!(
                        "listed sets do not match kind {:?}",
                        self.kind
                    )));
                }
            }
        }
        Ok(family)
    }
}

pub fn read_family_file(path: &Path) -> Result<SupportFamily, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: FamilyFile = serde_json::from_str(&text)?;
    file.build()
}

fn number(field: &str, text: &str) -> Result<usize, CliError> {
    text.parse()
        .map_err(|_| CliError::Usage(format!("{field} must be a nonnegative integer, got {text:?}")))
}

/// Parses `homog:N:d`, `upto:N:d`, `primes:N`, `sqfree:N`, `file:<path>`,
/// or a bare path to a family file.
pub fn parse_family(arg: &str) -> Result<SupportFamily, CliError> {
    let parts: Vec<&str> = arg.split(':').collect();
    let spec = match parts.as_slice() {
        ["homog", n, d] => FamilySpec::Homogeneous {
            n: number("N", n)?,
            d: number("d", d)?,
        },
        ["upto", n, d] => FamilySpec::UpTo {
            n: number("N", n)?,
            d: number("d", d)?,
        },
        ["primes", n] => FamilySpec::PrimeSingletons { n: number("N", n)? },
        ["sqfree", n] => FamilySpec::SquareFree { n: number("N", n)? },
        ["homog" | "upto" | "primes" | "sqfree", ..] => {
            return Err(CliError::Usage(format!("malformed family shorthand {arg:?}")))
        }
        _ => {
            let path = arg.strip_prefix("file:").unwrap_or(arg);
            return read_family_file(Path::new(path));
        }
    };
    Ok(make_family(&spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthands() {
        assert_eq!(parse_family("homog:5:2").unwrap().len(), 10);
        assert_eq!(parse_family("upto:5:2").unwrap().len(), 16);
        assert_eq!(parse_family("primes:10").unwrap().len(), 4);
        assert_eq!(parse_family("sqfree:10").unwrap().len(), 7);
        assert!(matches!(parse_family("upto:5"), Err(CliError::Usage(_))));
        assert!(matches!(parse_family("primes:-1"), Err(CliError::Usage(_))));
        assert!(matches!(parse_family("no/such/file.json"), Err(CliError::Io { .. })));
    }

    #[test]
    fn file_round_trip() {
        let family = parse_family("upto:4:2").unwrap();
        let file = FamilyFile::from_family(&family);
        let text = serde_json::to_string(&file).unwrap();
        let back: FamilyFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), family);
        let explicit: FamilyFile = serde_json::from_str(r#"{"kind":"explicit","N":4,"sets":[[1,2],[3]]}"#).unwrap();
        assert_eq!(explicit.build().unwrap().index_lists(), vec![vec![1, 2], vec![3]]);
    }

    #[test]
    fn rejects_bad_files() {
        for text in [
            r#"{"kind":"homogeneous","N":4}"#,
            r#"{"kind":"explicit","N":4}"#,
            r#"{"kind":"cubic","N":4}"#,
            r#"{"kind":"explicit","N":4,"sets":[[3,3]]}"#,
            r#"{"kind":"upto","N":3,"d":1,"sets":[[1],[2],[3]]}"#,
        ] {
            let file: FamilyFile = serde_json::from_str(text).unwrap();
            assert!(file.build().is_err(), "{text}");
        }
    }
}
