//! hMETIS `.hgr` hypergraph files.
//!
//! ```text
//! % comment
//! <numNets> <numNodes> [fmt]
//! <net line>      × numNets   (1-based node ids; leading net weight if fmt is 1 or 11)
//! <node weight>   × numNodes  (only if fmt is 10 or 11)
//! ```
//!
//! Net weights are parsed but only unit weights are accepted. The emitter
//! writes the canonical form: no `fmt` field when every node weight is 1,
//! `fmt = 10` otherwise, single spaces, trailing newline.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, RawNetlist};

pub fn parse_hgr(text: &str) -> Result<Hypergraph> {
    let parsed = parse(text, true)?;
    Hypergraph::with_weights(parsed.node_weights, parsed.nets)
}

/// Like [`parse_hgr`] but keeps nets with fewer than two pins and repeated
/// pins, for netlists that still need [`crate::distributions::cleanup_netlist`].
pub fn parse_hgr_raw(text: &str) -> Result<RawNetlist> {
    parse(text, false)
}

fn parse(text: &str, strict: bool) -> Result<RawNetlist> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));

    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if !(2..=3).contains(&fields.len()) {
        return Err(Error::parse(hline, "header must be `numNets numNodes [fmt]`"));
    }
    let num_nets: usize = fields[0]
        .parse()
        .map_err(|_| Error::parse(hline, format!("invalid net count `{}`", fields[0])))?;
    let num_nodes: usize = fields[1]
        .parse()
        .map_err(|_| Error::parse(hline, format!("invalid node count `{}`", fields[1])))?;
    let fmt = fields.get(2).copied().unwrap_or("0");
    let (net_weights, node_weights) = match fmt {
        "0" if fields.len() == 2 => (false, false),
        "1" => (true, false),
        "10" => (false, true),
        "11" => (true, true),
        other => return Err(Error::parse(hline, format!("unsupported fmt `{other}`"))),
    };

    let mut nets = Vec::with_capacity(num_nets);
    let mut stamp = vec![usize::MAX; num_nodes];
    for e in 0..num_nets {
        let Some((line_no, line)) = lines.next() else {
            return Err(Error::parse(
                text.lines().count(),
                format!("expected {num_nets} nets, found {e}"),
            ));
        };
        let mut tokens = line.split_whitespace();
        if net_weights {
            let w = tokens.next().unwrap();
            match w.parse::<i64>() {
                Ok(1) => {}
                Ok(w) => return Err(Error::parse(line_no, format!("net weight {w} unsupported; only 1"))),
                Err(_) => return Err(Error::parse(line_no, format!("invalid net weight `{w}`"))),
            }
        }
        let mut net = Vec::new();
        for tok in tokens {
            let id: usize = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid node id `{tok}`")))?;
            if id == 0 || id > num_nodes {
                return Err(Error::parse(
                    line_no,
                    format!("node id {id} out of range 1..={num_nodes}"),
                ));
            }
            let v = id - 1;
            if strict && stamp[v] == e {
                return Err(Error::parse(line_no, format!("node {id} repeated in net")));
            }
            stamp[v] = e;
            net.push(v);
        }
        if strict && net.len() < 2 {
            return Err(Error::parse(line_no, format!("net has {} pin(s); at least 2 required", net.len())));
        }
        nets.push(net);
    }

    let mut weights = vec![1u32; num_nodes];
    if node_weights {
        for (v, w) in weights.iter_mut().enumerate() {
            let Some((line_no, line)) = lines.next() else {
                return Err(Error::parse(
                    text.lines().count(),
                    format!("expected {num_nodes} node weights, found {v}"),
                ));
            };
            *w = line
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid node weight `{line}`")))?;
        }
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::parse(
            line_no,
            format!("expected {num_nets} nets, found more lines than declared"),
        ));
    }
    Ok(RawNetlist {
        node_weights: weights,
        nets,
    })
}

pub fn emit_hgr(hg: &Hypergraph) -> Result<String> {
    if let Some(v) = hg.node_weights().iter().position(|&w| w == 0) {
        return Err(Error::contract(format!(
            "node {v} has weight 0; .hgr files require positive node weights"
        )));
    }
    let weighted = hg.node_weights().iter().any(|&w| w != 1);
    let mut out = String::new();
    write!(out, "{} {}", hg.num_nets(), hg.num_nodes()).unwrap();
    out.push_str(if weighted { " 10\n" } else { "\n" });
    for net in hg.nets() {
        for (i, &v) in net.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{}", v + 1).unwrap();
        }
        out.push('\n');
    }
    if weighted {
        for &w in hg.node_weights() {
            writeln!(out, "{w}").unwrap();
        }
    }
    Ok(out)
}
