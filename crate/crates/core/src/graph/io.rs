//! Text formats: SNAP edge lists, SNAP community files and a small GML subset.

use std::io::{BufRead, Write};

use super::{Cover, ExternalId, Graph, Partition};
use crate::error::{Error, Result};

fn parse_id(token: &str, line: usize) -> Result<ExternalId> {
    token.parse::<ExternalId>().map_err(|_| Error::Parse {
        line,
        message: format!("invalid node id {token:?}"),
    })
}

/// Reads a whitespace-separated edge list. Lines starting with `#` are
/// comments; blank lines are skipped.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("{} tokens, expected 2", tokens.len()),
            });
        }
        pairs.push((parse_id(tokens[0], lineno)?, parse_id(tokens[1], lineno)?));
    }
    Ok(Graph::from_edges(&pairs)?.0)
}

/// One `u<TAB>v` line per canonical edge, in external ids.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    for (u, v) in g.external_edges() {
        writeln!(out, "{u}\t{v}")?;
    }
    Ok(())
}

/// Reads `node label` lines (any whitespace). Comments and blank lines are
/// skipped; a node listed twice is an error.
pub fn parse_label_file<R: BufRead>(reader: R) -> Result<Vec<(ExternalId, u64)>> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("{} tokens, expected node and label", tokens.len()),
            });
        }
        let node = parse_id(tokens[0], lineno)?;
        let label = tokens[1].parse::<u64>().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("invalid label {:?}", tokens[1]),
        })?;
        if !seen.insert(node) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("node {node} listed twice"),
            });
        }
        out.push((node, label));
    }
    Ok(out)
}

/// `node<TAB>label` per node, sorted by external id, labels renumbered
/// `0..k` in that order.
pub fn write_label_file<W: Write>(g: &Graph, labels: &Partition, mut out: W) -> Result<()> {
    let mut rows: Vec<(ExternalId, u64)> = (0..g.node_count())
        .map(|i| (g.external_id(i), labels.label(i)))
        .collect();
    rows.sort_unstable();
    let mut map = std::collections::HashMap::new();
    for (node, label) in rows {
        let next = map.len();
        let l = *map.entry(label).or_insert(next);
        writeln!(out, "{node}\t{l}")?;
    }
    Ok(())
}

/// Reads a SNAP `cmty` file: one community per non-empty line.
pub fn parse_community_file<R: BufRead>(reader: R) -> Result<Cover> {
    let mut communities = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let ids = trimmed
            .split_whitespace()
            .map(|t| parse_id(t, i + 1))
            .collect::<Result<Vec<_>>>()?;
        communities.push(ids);
    }
    Cover::new(communities)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Word(String),
    Str(String),
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let mut tokens = Vec::new();
    let mut line = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '[' => {
                tokens.push((Token::Open, line));
                chars.next();
            }
            ']' => {
                tokens.push((Token::Close, line));
                chars.next();
            }
            '"' => {
                let start = line;
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(ch) => {
                            if ch == '\n' {
                                line += 1;
                            }
                            s.push(ch);
                        }
                        None => {
                            return Err(Error::Parse {
                                line: start,
                                message: "unterminated string".into(),
                            })
                        }
                    }
                }
                tokens.push((Token::Str(s), start));
            }
            '#' => {
                // comment to end of line
                while let Some(&ch) = chars.peek() {
                    if ch == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || ch == '[' || ch == ']' || ch == '"' {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                tokens.push((Token::Word(s), line));
            }
        }
    }
    Ok(tokens)
}

#[derive(Debug, Clone)]
enum Value {
    Scalar(String, usize),
    List(Vec<(String, Value)>, usize),
}

fn parse_list(
    tokens: &[(Token, usize)],
    pos: &mut usize,
    nested: bool,
    open_line: usize,
) -> Result<Vec<(String, Value)>> {
    let mut items = Vec::new();
    loop {
        let Some((tok, line)) = tokens.get(*pos) else {
            if nested {
                return Err(Error::Parse {
                    line: open_line,
                    message: "unbalanced brackets: '[' never closed".into(),
                });
            }
            return Ok(items);
        };
        let line = *line;
        match tok {
            Token::Close => {
                if !nested {
                    return Err(Error::Parse {
                        line,
                        message: "unbalanced brackets: unexpected ']'".into(),
                    });
                }
                *pos += 1;
                return Ok(items);
            }
            Token::Word(key) => {
                *pos += 1;
                let key = key.clone();
                let value = match tokens.get(*pos) {
                    Some((Token::Open, l)) => {
                        let l = *l;
                        *pos += 1;
                        Value::List(parse_list(tokens, pos, true, l)?, l)
                    }
                    Some((Token::Word(w), l)) | Some((Token::Str(w), l)) => {
                        *pos += 1;
                        Value::Scalar(w.clone(), *l)
                    }
                    Some((Token::Close, l)) => {
                        return Err(Error::Parse {
                            line: *l,
                            message: format!("key {key:?} has no value"),
                        })
                    }
                    None => {
                        return Err(Error::Parse {
                            line,
                            message: format!("key {key:?} has no value"),
                        })
                    }
                };
                items.push((key, value));
            }
            Token::Open | Token::Str(_) => {
                return Err(Error::Parse {
                    line,
                    message: "expected a key".into(),
                })
            }
        }
    }
}

fn scalar_int(items: &[(String, Value)], key: &str) -> Result<Option<(i64, usize)>> {
    for (k, v) in items {
        if k == key {
            return match v {
                Value::Scalar(s, line) => s
                    .parse::<i64>()
                    .map(|x| Some((x, *line)))
                    .map_err(|_| Error::Parse {
                        line: *line,
                        message: format!("{key} is not an integer: {s:?}"),
                    }),
                Value::List(_, line) => Err(Error::Parse {
                    line: *line,
                    message: format!("{key} must be a scalar"),
                }),
            };
        }
    }
    Ok(None)
}

fn node_id(raw: i64, line: usize) -> Result<ExternalId> {
    u64::try_from(raw).map_err(|_| Error::Parse {
        line,
        message: format!("negative node id {raw}"),
    })
}

/// Reads the GML subset used by small benchmark networks: `node` blocks with
/// `id` and integer `value`, `edge` blocks with `source` and `target`. Other
/// keys are ignored. Nodes keep declaration order; the partition holds each
/// node's `value`.
pub fn parse_gml_subset<R: BufRead>(mut reader: R) -> Result<(Graph, Partition)> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let tokens = tokenize(&text)?;
    let mut pos = 0;
    let top = parse_list(&tokens, &mut pos, false, 1)?;

    let graph_items = top
        .iter()
        .find_map(|(k, v)| match (k.as_str(), v) {
            ("graph", Value::List(items, _)) => Some(items),
            _ => None,
        })
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: "no graph block".into(),
        })?;

    let mut nodes = Vec::new();
    let mut values = Vec::new();
    let mut edges = Vec::new();
    for (key, value) in graph_items {
        let Value::List(items, line) = value else {
            continue;
        };
        match key.as_str() {
            "node" => {
                let (id, id_line) = scalar_int(items, "id")?.ok_or_else(|| Error::Parse {
                    line: *line,
                    message: "node without id".into(),
                })?;
                let (val, _) = scalar_int(items, "value")?.ok_or_else(|| Error::Parse {
                    line: *line,
                    message: format!("missing value on node {id}"),
                })?;
                nodes.push(node_id(id, id_line)?);
                values.push(val);
            }
            "edge" => {
                let missing = |what: &str| Error::Parse {
                    line: *line,
                    message: format!("edge without {what}"),
                };
                let (s, sl) = scalar_int(items, "source")?.ok_or_else(|| missing("source"))?;
                let (t, tl) = scalar_int(items, "target")?.ok_or_else(|| missing("target"))?;
                edges.push((node_id(s, sl)?, node_id(t, tl)?, *line));
            }
            _ => {}
        }
    }

    let known: std::collections::HashSet<ExternalId> = nodes.iter().copied().collect();
    for &(s, t, line) in &edges {
        for id in [s, t] {
            if !known.contains(&id) {
                return Err(Error::Parse {
                    line,
                    message: format!("edge references unknown id {id}"),
                });
            }
        }
    }
    let pairs: Vec<(ExternalId, ExternalId)> = edges.iter().map(|&(s, t, _)| (s, t)).collect();
    let (graph, _) = Graph::from_nodes_and_edges(&nodes, &pairs)?;
    // Labels are stored as u64; offset negative conference codes bijectively.
    let labels = values.into_iter().map(|v| v as u64).collect();
    Ok((graph, Partition::new(labels)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_files() {
        let rows = parse_label_file("# x\n5 1\n3\t0\n\n".as_bytes()).unwrap();
        assert_eq!(rows, vec![(5, 1), (3, 0)]);
        assert!(parse_label_file("1 2 3\n".as_bytes()).is_err());
        assert!(parse_label_file("1 2\n1 3\n".as_bytes()).is_err());
        let (g, _) = Graph::from_edges(&[(9, 4), (4, 7)]).unwrap();
        let mut buf = Vec::new();
        write_label_file(&g, &Partition::new(vec![8, 8, 2]), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "4\t0\n7\t1\n9\t0\n");
    }

    #[test]
    fn edge_list_with_comment() {
        let g = parse_edge_list("# c\n0 1\n1 2\n".as_bytes()).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
    }

    #[test]
    fn edge_list_accepts_tabs() {
        let g = parse_edge_list("0\t1\n".as_bytes()).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
    }

    #[test]
    fn edge_list_rejects_three_tokens() {
        match parse_edge_list("0 1 2\n".as_bytes()) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 1);
                assert!(message.contains("3 tokens"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn edge_list_rejects_non_integers() {
        let err = parse_edge_list("0 1\nx 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(
            parse_edge_list("-1 2\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn write_triangle_sorted() {
        let g = parse_edge_list("2 1\n0 2\n1 0\n".as_bytes()).unwrap();
        let mut out = Vec::new();
        write_edge_list(&g, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "2\t1\n2\t0\n1\t0\n");
    }

    #[test]
    fn write_edgeless_graph_is_empty() {
        let g = Graph::with_node_count(4, &[]).unwrap();
        let mut out = Vec::new();
        write_edge_list(&g, &mut out).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn community_file() {
        let c = parse_community_file("1 2 3\n4 5\n".as_bytes()).unwrap();
        assert_eq!(c.communities(), &[vec![1, 2, 3], vec![4, 5]]);
        let c = parse_community_file("1 2\n\n3 4\n".as_bytes()).unwrap();
        assert_eq!(c.len(), 2);
        assert!(matches!(
            parse_community_file("a b\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    const TWO_NODES: &str = r#"graph
[
  directed 0
  node
  [
    id 0
    label "A"
    value 0
  ]
  node
  [
    id 1
    label "B"
    value 1
  ]
  edge
  [
    source 1
    target 0
  ]
]
"#;

    #[test]
    fn gml_two_nodes() {
        let (g, p) = parse_gml_subset(TWO_NODES.as_bytes()).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(p.labels(), &[0, 1]);
    }

    #[test]
    fn gml_missing_value() {
        let text = TWO_NODES.replace("value 1", "");
        let err = parse_gml_subset(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("missing value"), "{err}");
    }

    #[test]
    fn gml_structural_errors() {
        let no_id = TWO_NODES.replace("id 1", "");
        assert!(parse_gml_subset(no_id.as_bytes())
            .unwrap_err()
            .to_string()
            .contains("without id"));
        let unknown = TWO_NODES.replace("source 1", "source 7");
        assert!(parse_gml_subset(unknown.as_bytes())
            .unwrap_err()
            .to_string()
            .contains("unknown id 7"));
        let unbalanced = TWO_NODES.trim_end().trim_end_matches(']');
        assert!(parse_gml_subset(unbalanced.as_bytes())
            .unwrap_err()
            .to_string()
            .contains("unbalanced"));
        let extra = format!("{TWO_NODES}]\n");
        assert!(parse_gml_subset(extra.as_bytes())
            .unwrap_err()
            .to_string()
            .contains("unbalanced"));
    }
}
