//! OpenQASM 2.0 emission and a reader for the subset we emit.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{Circuit, Gate};
use crate::error::{Error, Result};

/// Renders `c` as OpenQASM 2.0: one register `q`, `cx`/`ccx` lines in gate
/// order. Annotations and output labels go in the header as comments;
/// segment boundaries become `// begin`/`// end` comments.
pub fn emit_qasm(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    for (k, v) in c.annotations() {
        let _ = writeln!(out, "// {k}: {v}");
    }
    if !c.ancillae().is_empty() {
        let list: Vec<String> = c.ancillae().iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, "// ancillae: {}", list.join(","));
    }
    for (q, label) in c.output_labels() {
        let _ = writeln!(out, "// output q[{q}] = {label}");
    }
    let _ = writeln!(out, "qreg q[{}];", c.width());

    // nested segments: open outermost first, close innermost first
    let mut opens: BTreeMap<usize, Vec<(usize, &str)>> = BTreeMap::new();
    let mut closes: BTreeMap<usize, Vec<(usize, &str)>> = BTreeMap::new();
    for s in c.segments() {
        opens
            .entry(s.start)
            .or_default()
            .push((s.end - s.start, &s.name));
        closes
            .entry(s.end)
            .or_default()
            .push((s.end - s.start, &s.name));
    }
    for v in opens.values_mut() {
        v.sort_by_key(|&(len, _)| std::cmp::Reverse(len));
    }
    for v in closes.values_mut() {
        v.sort_by_key(|&(len, _)| len);
    }
    let marker = |out: &mut String, i: usize| {
        for (_, n) in closes.get(&i).into_iter().flatten() {
            let _ = writeln!(out, "// end {n}");
        }
        for (_, n) in opens.get(&i).into_iter().flatten() {
            let _ = writeln!(out, "// begin {n}");
        }
    };
    for (i, g) in c.gates().iter().enumerate() {
        marker(&mut out, i);
        match *g {
            Gate::Cnot { control, target } => {
                let _ = writeln!(out, "cx q[{control}],q[{target}];");
            }
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => {
                let _ = writeln!(out, "ccx q[{control1}],q[{control2}],q[{target}];");
            }
        }
    }
    marker(&mut out, c.len());
    out
}

/// Reads back the gate list, width and output labels from text produced by
/// [`emit_qasm`]. Accepts only `qreg`, `cx`, `ccx` statements on a single register.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut width = None;
    let mut reg = String::new();
    let mut gates = Vec::new();
    let mut labels = BTreeMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let err = |reason: String| Error::Qasm { line, reason };
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix("//") {
            if let Some(rest) = comment.trim().strip_prefix("output ") {
                if let Some((lhs, rhs)) = rest.split_once('=') {
                    let q = parse_ref(lhs.trim(), None).map_err(err)?;
                    labels.insert(q, rhs.trim().to_string());
                }
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let stmt = trimmed
            .strip_suffix(';')
            .ok_or_else(|| err("missing ';'".into()))?
            .trim();
        if stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
            continue;
        }
        let (op, args) = stmt
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(format!("unrecognized statement {stmt:?}")))?;
        match op {
            "qreg" => {
                if width.is_some() {
                    return Err(err("only one register is supported".into()));
                }
                let args = args.trim();
                let (name, size) = args.split_once('[').ok_or_else(|| err("bad qreg".into()))?;
                let size = size
                    .strip_suffix(']')
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| err("bad qreg size".into()))?;
                reg = name.trim().to_string();
                width = Some(size);
            }
            "cx" | "ccx" => {
                let w = width.ok_or_else(|| err("gate before qreg".into()))?;
                let qs = args
                    .split(',')
                    .map(|a| parse_ref(a.trim(), Some(&reg)))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(err)?;
                let g = match (op, qs.as_slice()) {
                    ("cx", &[c, t]) => Gate::cnot(c, t),
                    ("ccx", &[a, b, t]) => Gate::toffoli(a, b, t),
                    _ => return Err(err(format!("wrong operand count for {op}"))),
                };
                g.validate(w).map_err(|e| err(e.to_string()))?;
                gates.push(g);
            }
            _ => return Err(err(format!("unsupported operation {op:?}"))),
        }
    }
    let width = width.ok_or(Error::Qasm {
        line: 0,
        reason: "no qreg declaration".into(),
    })?;
    Ok(Circuit::from_parts(width, gates, labels))
}

fn parse_ref(s: &str, reg: Option<&str>) -> std::result::Result<usize, String> {
    let (name, idx) = s
        .split_once('[')
        .ok_or_else(|| format!("bad qubit reference {s:?}"))?;
    if let Some(reg) = reg {
        if name.trim() != reg {
            return Err(format!("unknown register {name:?}"));
        }
    }
    idx.strip_suffix(']')
        .and_then(|i| i.trim().parse().ok())
        .ok_or_else(|| format!("bad qubit index in {s:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_cnot() {
        let mut c = Circuit::new(2);
        c.push_cnot(0, 1).unwrap();
        let text = emit_qasm(&c);
        assert_eq!(text.matches("cx q[0],q[1];").count(), 1);
        assert!(text.contains("qreg q[2];"));
    }

    #[test]
    fn header_and_segments() {
        let mut c = Circuit::new(3);
        c.annotate("modulus", "x^2+x+1");
        c.set_output_label(0, "Y_0");
        c.segment("s", |c| c.push_toffoli(0, 1, 2)).unwrap();
        let text = emit_qasm(&c);
        assert!(text.contains("// modulus: x^2+x+1"));
        assert!(text.contains("// output q[0] = Y_0"));
        assert!(text.contains("// begin s\nccx q[0],q[1],q[2];\n// end s"));
        let back = parse_qasm(&text).unwrap();
        assert_eq!(
            back.output_labels().get(&0).map(String::as_str),
            Some("Y_0")
        );
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_qasm("OPENQASM 2.0;\ncx q[0],q[1];\n").is_err());
        assert!(parse_qasm("qreg q[2];\ncx q[0],q[0];\n").is_err());
        assert!(parse_qasm("qreg q[2];\ncx q[0],q[2];\n").is_err());
        assert!(parse_qasm("qreg q[2];\nh q[0];\n").is_err());
        assert!(parse_qasm("qreg q[2];\ncx q[0],q[1]\n").is_err());
        assert!(parse_qasm("qreg q[3];\ncx q[0],r[1];\n").is_err());
    }

    fn arb_gate(width: usize) -> impl Strategy<Value = Gate> {
        prop_oneof![
            (0..width, 0..width).prop_map(|(a, b)| Gate::cnot(a, b)),
            (0..width, 0..width, 0..width).prop_map(|(a, b, c)| Gate::toffoli(a, b, c)),
        ]
    }

    proptest! {
        #[test]
        fn round_trip(width in 3usize..20, gates in proptest::collection::vec(arb_gate(20), 0..60)) {
            let mut c = Circuit::new(width);
            for g in gates {
                let _ = c.push(g);
            }
            let back = parse_qasm(&emit_qasm(&c)).unwrap();
            prop_assert_eq!(back.width(), c.width());
            prop_assert_eq!(back.gates(), c.gates());
        }
    }
}
