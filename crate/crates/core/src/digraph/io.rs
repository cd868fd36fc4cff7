//! Graph files.
//!
//! Edge-list format: a header line `n m`, then `m` lines `tail head`
//! (0-indexed, whitespace separated). The TOML variant carries the same arcs
//! plus generator metadata.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Digraph;
use crate::error::{Error, Result};

/// Metadata stored next to the arcs in the TOML variant.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct GraphDocument {
    n: usize,
    #[serde(flatten)]
    meta: GraphMeta,
    arcs: Vec<[usize; 2]>,
}

pub fn to_edge_list(d: &Digraph) -> String {
    let mut s = String::with_capacity(8 * d.arc_count() + 16);
    writeln!(s, "{} {}", d.n(), d.arc_count()).unwrap();
    for (u, v) in d.arcs() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("missing {what}"),
            })?
            .parse::<usize>()
            .map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad {what}: {e}"),
            })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            msg: "trailing fields".into(),
        });
    }
    Ok((a, b))
}

pub fn parse_edge_list(text: &str) -> Result<Digraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty graph file".into(),
    })?;
    let (n, m) = parse_pair(header, hl)?;
    let mut d = Digraph::new(n);
    let mut seen = 0;
    for (ln, line) in lines {
        let (u, v) = parse_pair(line, ln)?;
        let added = d.add_arc(u, v).map_err(|e| Error::Parse {
            line: ln,
            msg: e.to_string(),
        })?;
        if !added {
            return Err(Error::Parse {
                line: ln,
                msg: format!("duplicate arc {u}->{v}"),
            });
        }
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse {
            line: hl,
            msg: format!("header announces {m} arcs, found {seen}"),
        });
    }
    Ok(d)
}

pub fn to_toml(d: &Digraph, meta: &GraphMeta) -> String {
    let doc = GraphDocument {
        n: d.n(),
        meta: meta.clone(),
        arcs: d.arcs().map(|(u, v)| [u, v]).collect(),
    };
    toml::to_string(&doc).expect("graph document serialises")
}

pub fn parse_toml(text: &str) -> Result<(Digraph, GraphMeta)> {
    let doc: GraphDocument = toml::from_str(text).map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })?;
    let d = Digraph::from_arcs(doc.n, doc.arcs.into_iter().map(|[u, v]| (u, v)))?;
    Ok((d, doc.meta))
}

fn is_toml(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "toml")
}

/// Reads either format; `.toml` files use the structured variant.
pub fn read_graph(path: &Path) -> Result<(Digraph, GraphMeta)> {
    let text = std::fs::read_to_string(path)?;
    if is_toml(path) {
        parse_toml(&text)
    } else {
        Ok((parse_edge_list(&text)?, GraphMeta::default()))
    }
}

pub fn write_graph(path: &Path, d: &Digraph, meta: &GraphMeta) -> Result<()> {
    let text = if is_toml(path) {
        to_toml(d, meta)
    } else {
        to_edge_list(d)
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{gen_extremal, gen_random_semidegree};

    #[test]
    fn edge_list_roundtrip() {
        let d = gen_random_semidegree(12, 0.6, 3).unwrap();
        let text = to_edge_list(&d);
        assert_eq!(parse_edge_list(&text).unwrap(), d);
    }

    #[test]
    fn toml_roundtrip_keeps_meta() {
        let d = gen_extremal(2).unwrap();
        let meta = GraphMeta {
            generator: Some("extremal".into()),
            seed: None,
            params: Some("k=2".into()),
        };
        let (back, m) = parse_toml(&to_toml(&d, &meta)).unwrap();
        assert_eq!(back, d);
        assert_eq!(m, meta);
    }

    #[test]
    fn edge_list_errors() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("3 1\n0 0\n").is_err());
        assert!(parse_edge_list("3 2\n0 1\n").is_err());
        assert!(parse_edge_list("3 2\n0 1\n0 1\n").is_err());
        assert!(parse_edge_list("3 1\n0 x\n").is_err());
        assert!(parse_edge_list("3 1\n0 5\n").is_err());
    }

    #[test]
    fn header_format() {
        let d = Digraph::from_arcs(3, [(2, 0), (0, 1)]).unwrap();
        assert_eq!(to_edge_list(&d), "3 2\n0 1\n2 0\n");
    }
}
