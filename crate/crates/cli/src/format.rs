//! The line-based instance and allocation wire formats.
//!
//! Instance files:
//!
//! ```text
//! agents <n>
//! goods <m>
//! valuations
//! <n lines of m space-separated non-negative decimals>
//! edges
//! <u> <v> [w]
//! ```
//!
//! Ids are 1-based, `#` starts a comment, blank lines are ignored, and
//! decimals carry at most nine fractional digits. Values are parsed onto a
//! per-file power-of-ten scale so all downstream arithmetic is exact.
//! Allocation files are `<good> <agent>` lines, one per good.

use fairdiv_core::instance::{Allocation, AllocationReport, Edge, Instance};
use std::collections::HashSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed non-negative decimal, fractional part trimmed of trailing
/// zeros.
#[derive(Debug, Clone, Copy)]
pub struct Decimal {
    pub int: u64,
    pub frac: u32,
    pub digits: u32,
}

pub const MAX_FRACTION_DIGITS: u32 = 9;

pub fn parse_decimal(token: &str) -> Result<Decimal, String> {
    let (int_str, frac_str) = match token.split_once('.') {
        Some((i, f)) => (i, f),
        None => (token, ""),
    };
    if int_str.is_empty() && frac_str.is_empty() {
        return Err(format!("invalid number '{token}'"));
    }
    if !int_str.chars().all(|c| c.is_ascii_digit())
        || !frac_str.chars().all(|c| c.is_ascii_digit())
    {
        return Err(format!("invalid number '{token}'"));
    }
    let frac_str = frac_str.trim_end_matches('0');
    if frac_str.len() as u32 > MAX_FRACTION_DIGITS {
        return Err(format!(
            "'{token}' has more than {MAX_FRACTION_DIGITS} fractional digits"
        ));
    }
    let int: u64 = if int_str.is_empty() {
        0
    } else {
        int_str
            .parse()
            .map_err(|_| format!("number '{token}' is too large"))?
    };
    let frac: u32 = if frac_str.is_empty() {
        0
    } else {
        frac_str.parse().expect("at most 9 digits")
    };
    Ok(Decimal {
        int,
        frac,
        digits: frac_str.len() as u32,
    })
}

/// Scales a decimal onto `10^scale_digits`.
fn scaled(d: &Decimal, scale_digits: u32) -> Result<u64, String> {
    debug_assert!(d.digits <= scale_digits || d.frac == 0);
    let scale = 10u64.pow(scale_digits);
    d.int
        .checked_mul(scale)
        .and_then(|v| v.checked_add(d.frac as u64 * 10u64.pow(scale_digits - d.digits.min(scale_digits))))
        .ok_or_else(|| "value too large".to_string())
}

/// Canonical decimal for a scaled value; `scale` is a power of ten.
pub fn format_scaled(value: u128, scale: u64) -> String {
    if scale == 1 {
        return value.to_string();
    }
    let digits = scale.ilog10();
    let int = value / scale as u128;
    let frac = (value % scale as u128) as u64;
    if frac == 0 {
        int.to_string()
    } else {
        let s = format!("{frac:0width$}", width = digits as usize);
        format!("{}.{}", int, s.trim_end_matches('0'))
    }
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let body = raw.split('#').next().unwrap_or("").trim();
                (!body.is_empty()).then_some((i + 1, body))
            })
            .collect();
        Lines { lines, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.lines.get(self.pos).copied();
        self.pos += 1;
        item
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(0, |(i, _)| *i)
    }
}

fn expect_keyword_count(
    lines: &mut Lines<'_>,
    keyword: &str,
) -> Result<(usize, usize), ParseError> {
    let Some((lineno, body)) = lines.next() else {
        return Err(ParseError::new(0, format!("missing '{keyword}' line")));
    };
    let mut tokens = body.split_whitespace();
    if tokens.next() != Some(keyword) {
        return Err(ParseError::new(lineno, format!("expected '{keyword} <count>'")));
    }
    let value = tokens
        .next()
        .and_then(|t| t.parse::<usize>().ok())
        .ok_or_else(|| ParseError::new(lineno, format!("expected '{keyword} <count>'")))?;
    if tokens.next().is_some() {
        return Err(ParseError::new(lineno, "trailing tokens"));
    }
    Ok((lineno, value))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = Lines::new(text);

    let (lineno, n) = expect_keyword_count(&mut lines, "agents")?;
    if n == 0 {
        return Err(ParseError::new(lineno, "agent count must be at least 1"));
    }
    let (_, m) = expect_keyword_count(&mut lines, "goods")?;

    match lines.next() {
        Some((_, "valuations")) => {}
        Some((lineno, _)) => return Err(ParseError::new(lineno, "expected 'valuations'")),
        None => return Err(ParseError::new(lines.last_line(), "missing 'valuations' section")),
    }

    let mut value_rows: Vec<(usize, Vec<Decimal>)> = Vec::with_capacity(n);
    if m > 0 {
        for row in 0..n {
            let Some((lineno, body)) = lines.next() else {
                return Err(ParseError::new(
                    lines.last_line(),
                    format!("expected {n} valuation rows, found {row}"),
                ));
            };
            let mut values = Vec::with_capacity(m);
            for token in body.split_whitespace() {
                values.push(
                    parse_decimal(token).map_err(|e| ParseError::new(lineno, e))?,
                );
            }
            if values.len() != m {
                return Err(ParseError::new(
                    lineno,
                    format!("expected {m} values, found {}", values.len()),
                ));
            }
            value_rows.push((lineno, values));
        }
    } else {
        value_rows = vec![(0, Vec::new()); n];
    }

    match lines.next() {
        Some((_, "edges")) => {}
        Some((lineno, _)) => return Err(ParseError::new(lineno, "expected 'edges'")),
        None => return Err(ParseError::new(lines.last_line(), "missing 'edges' section")),
    }

    let mut raw_edges: Vec<(usize, usize, usize, Decimal)> = Vec::new();
    let mut seen = HashSet::new();
    while let Some((lineno, body)) = lines.next() {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 2 && tokens.len() != 3 {
            return Err(ParseError::new(lineno, "expected '<u> <v> [w]'"));
        }
        let parse_id = |t: &str| -> Result<usize, ParseError> {
            let id: usize = t
                .parse()
                .map_err(|_| ParseError::new(lineno, format!("invalid good id '{t}'")))?;
            if id == 0 || id > m {
                return Err(ParseError::new(
                    lineno,
                    format!("good id {id} outside [1, {m}]"),
                ));
            }
            Ok(id - 1)
        };
        let u = parse_id(tokens[0])?;
        let v = parse_id(tokens[1])?;
        if u == v {
            return Err(ParseError::new(lineno, format!("self-loop ({} {})", u + 1, v + 1)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(ParseError::new(
                lineno,
                format!("duplicate edge ({} {})", u + 1, v + 1),
            ));
        }
        let w = if tokens.len() == 3 {
            parse_decimal(tokens[2]).map_err(|e| ParseError::new(lineno, e))?
        } else {
            Decimal { int: 1, frac: 0, digits: 0 }
        };
        raw_edges.push((lineno, u, v, w));
    }

    let vdigits = value_rows
        .iter()
        .flat_map(|(_, row)| row)
        .map(|d| d.digits)
        .max()
        .unwrap_or(0);
    let wdigits = raw_edges.iter().map(|(_, _, _, w)| w.digits).max().unwrap_or(0);

    let mut valuations = Vec::with_capacity(n);
    for (row_line, row) in &value_rows {
        let mut out = Vec::with_capacity(m);
        for d in row {
            out.push(scaled(d, vdigits).map_err(|e| ParseError::new(*row_line, e))?);
        }
        valuations.push(out);
    }
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (lineno, u, v, w) in &raw_edges {
        edges.push(Edge {
            u: *u,
            v: *v,
            w: scaled(w, wdigits).map_err(|e| ParseError::new(*lineno, e))?,
        });
    }

    Instance::with_scales(n, valuations, edges, 10u64.pow(vdigits), 10u64.pow(wdigits))
        .map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn render_instance(instance: &Instance) -> String {
    let mut out = String::new();
    out.push_str(&format!("agents {}\n", instance.agents()));
    out.push_str(&format!("goods {}\n", instance.goods()));
    out.push_str("valuations\n");
    if instance.goods() > 0 {
        for i in 0..instance.agents() {
            let row: Vec<String> = instance
                .valuation_row(i)
                .iter()
                .map(|&v| format_scaled(v as u128, instance.vscale()))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out.push_str("edges\n");
    for e in instance.edges() {
        let (u, v) = (e.u.min(e.v) + 1, e.u.max(e.v) + 1);
        let w = format_scaled(e.w as u128, instance.wscale());
        if w == "1" {
            out.push_str(&format!("{u} {v}\n"));
        } else {
            out.push_str(&format!("{u} {v} {w}\n"));
        }
    }
    out
}

pub fn parse_allocation(text: &str, instance: &Instance) -> Result<Allocation, ParseError> {
    let m = instance.goods();
    let n = instance.agents();
    let mut owners: Vec<Option<usize>> = vec![None; m];
    let mut lines = Lines::new(text);
    while let Some((lineno, body)) = lines.next() {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(ParseError::new(lineno, "expected '<good> <agent>'"));
        }
        let good: usize = tokens[0]
            .parse()
            .map_err(|_| ParseError::new(lineno, format!("invalid good id '{}'", tokens[0])))?;
        let agent: usize = tokens[1]
            .parse()
            .map_err(|_| ParseError::new(lineno, format!("invalid agent id '{}'", tokens[1])))?;
        if good == 0 || good > m {
            return Err(ParseError::new(lineno, format!("good id {good} outside [1, {m}]")));
        }
        if agent == 0 || agent > n {
            return Err(ParseError::new(
                lineno,
                format!("agent id {agent} outside [1, {n}]"),
            ));
        }
        if owners[good - 1].is_some() {
            return Err(ParseError::new(lineno, format!("good {good} assigned twice")));
        }
        owners[good - 1] = Some(agent - 1);
    }
    if let Some(missing) = owners.iter().position(Option::is_none) {
        return Err(ParseError::new(
            lines.last_line(),
            format!("good {} has no owner", missing + 1),
        ));
    }
    Ok(Allocation::from_owners(
        owners.into_iter().map(Option::unwrap).collect(),
    ))
}

pub fn render_allocation(allocation: &Allocation) -> String {
    let mut out = String::new();
    for g in 0..allocation.len() {
        out.push_str(&format!(
            "{} {}\n",
            g + 1,
            allocation.owner(g).expect("complete allocation") + 1
        ));
    }
    out
}

pub fn render_report(report: &AllocationReport) -> String {
    let sizes: Vec<String> = report.bundle_sizes.iter().map(usize::to_string).collect();
    let values: Vec<String> = report
        .bundle_values
        .iter()
        .map(|row| {
            row.iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    format!(
        "# report:\n# violations={}\n# baseline={}\n# ef1={}\n# balanced={}\n# bundle_sizes={}\n# bundle_values={}\n",
        report.violations,
        report.baseline,
        report.ef1,
        report.balanced,
        sizes.join(","),
        values.join(";")
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const STAR5: &str = "\
# a star instance
agents 5
goods 6
valuations
1 1 1 1 1 0
1 1 1 1 1 0
1 1 1 1 1 0
1 1 1 1 1 0
1 1 1 1 1 0
edges
1 6
2 6
3 6
4 6
5 6
";

    #[test]
    fn parses_star() {
        let inst = parse_instance(STAR5).unwrap();
        assert_eq!(inst.agents(), 5);
        assert_eq!(inst.goods(), 6);
        assert_eq!(inst.edge_count(), 5);
        assert!(inst.identical_valuations());
        assert!(inst.is_unit_weighted());
    }

    #[test]
    fn empty_edge_section() {
        let text = "agents 2\ngoods 2\nvaluations\n1 2\n2 1\nedges\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.edge_count(), 0);
    }

    #[test]
    fn self_loop_reports_line() {
        let text = "agents 2\ngoods 3\nvaluations\n1 1 1\n1 1 1\nedges\n3 3\n";
        let err = parse_instance(text).unwrap_err();
        assert_eq!(err.line, 7);
        assert!(err.message.contains("self-loop"));
    }

    #[test]
    fn duplicate_edge_reports_line() {
        let text = "agents 2\ngoods 3\nvaluations\n1 1 1\n1 1 1\nedges\n1 2\n2 1\n";
        let err = parse_instance(text).unwrap_err();
        assert_eq!(err.line, 8);
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn fractional_values_share_a_scale() {
        let text = "agents 2\ngoods 2\nvaluations\n0.5 0.25\n1 0\nedges\n1 2 2.5\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.vscale(), 100);
        assert_eq!(inst.value(0, 0), 50);
        assert_eq!(inst.value(0, 1), 25);
        assert_eq!(inst.value(1, 0), 100);
        assert_eq!(inst.wscale(), 10);
        assert_eq!(inst.edges()[0].w, 25);
        assert!(!inst.is_unit_weighted());
    }

    #[test]
    fn too_many_fraction_digits() {
        let text = "agents 1\ngoods 1\nvaluations\n0.0123456789\nedges\n";
        let err = parse_instance(text).unwrap_err();
        assert!(err.message.contains("fractional digits"));
    }

    #[test]
    fn trailing_zeros_are_canonical() {
        let a = parse_instance("agents 1\ngoods 2\nvaluations\n1.50 2\nedges\n").unwrap();
        let b = parse_instance("agents 1\ngoods 2\nvaluations\n1.5 2\nedges\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn render_round_trips() {
        let inst = parse_instance(STAR5).unwrap();
        let rendered = render_instance(&inst);
        assert_eq!(parse_instance(&rendered).unwrap(), inst);

        let weighted =
            parse_instance("agents 2\ngoods 3\nvaluations\n0.5 1 2\n3 1 0.125\nedges\n1 3 0.2\n2 3\n")
                .unwrap();
        let rendered = render_instance(&weighted);
        assert_eq!(parse_instance(&rendered).unwrap(), weighted);
    }

    #[test]
    fn zero_goods_round_trip() {
        let inst = parse_instance("agents 3\ngoods 0\nvaluations\nedges\n").unwrap();
        assert_eq!(inst.goods(), 0);
        assert_eq!(parse_instance(&render_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn allocation_round_trip_and_errors() {
        let inst = parse_instance(STAR5).unwrap();
        let alloc =
            fairdiv_core::instance::Allocation::from_owners(vec![0, 1, 2, 3, 4, 0]);
        let text = render_allocation(&alloc);
        assert_eq!(parse_allocation(&text, &inst).unwrap(), alloc);

        let err = parse_allocation("1 1\n1 2\n", &inst).unwrap_err();
        assert!(err.message.contains("twice"));
        let err = parse_allocation("1 9\n", &inst).unwrap_err();
        assert!(err.message.contains("agent id 9"));
        let err = parse_allocation("1 1\n", &inst).unwrap_err();
        assert!(err.message.contains("no owner"));
    }

    #[test]
    fn format_scaled_trims() {
        assert_eq!(format_scaled(1500, 1000), "1.5");
        assert_eq!(format_scaled(1000, 1000), "1");
        assert_eq!(format_scaled(7, 1), "7");
        assert_eq!(format_scaled(25, 100), "0.25");
    }
}
