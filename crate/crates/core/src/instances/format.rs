//! Line oriented instance files.
//!
//! ```text
//! # bound: 26
//! # note: free text, with \n and \\ escaped
//! L                      number of requirement levels, 0 when simplified
//! count                  per level (once when L = 0)
//! c_1 ... c_count
//! arcs
//! parent child           per arc
//! customers
//! profit k r_1 ... r_k   per customer
//! ```
//!
//! Requirements are numbered `1..=m` in file order and customers `1..=n`,
//! unless `# requirement-ids:` or `# customer-ids:` lists other ids. Lines
//! starting with `#` are otherwise comments. Files with levels are read as
//! dependent instances and folded into simplified form.

use std::fmt::Write as _;
use std::path::Path;

use crate::dependency::DependentInstance;
use crate::error::{NrpError, Result};
use crate::model::{Customer, CustomerId, Instance, Requirement, RequirementId};

/// Raw contents of an instance file.
struct InstanceFile {
    levels: usize,
    requirements: Vec<Requirement>,
    arcs: Vec<(RequirementId, RequirementId)>,
    customers: Vec<(Customer, Vec<RequirementId>)>,
    bound: Option<u64>,
    note: String,
}

struct Tokens<'a> {
    tokens: Vec<(usize, &'a str)>,
    at: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn next_raw(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let tok = self.tokens.get(self.at).copied().ok_or_else(|| NrpError::Parse {
            line: self.last_line + 1,
            message: format!("unexpected end of file, expected {what}"),
        })?;
        self.at += 1;
        Ok(tok)
    }

    fn next<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let (line, tok) = self.next_raw(what)?;
        tok.parse().map_err(|_| NrpError::Parse {
            line,
            message: format!("expected {what}, found `{tok}`"),
        })
    }

    fn line(&self) -> usize {
        self.tokens.get(self.at).map_or(self.last_line + 1, |t| t.0)
    }
}

fn parse_ids(line: usize, value: &str) -> Result<Vec<u32>> {
    value
        .split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| NrpError::Parse { line, message: format!("bad id `{t}`") })
        })
        .collect()
}

fn parse_file(text: &str) -> Result<InstanceFile> {
    let mut bound = None;
    let mut note = String::new();
    let mut requirement_ids = None;
    let mut customer_ids = None;
    let mut tokens = Vec::new();
    let mut last_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let trimmed = raw.trim();
        if let Some(meta) = trimmed.strip_prefix('#') {
            let Some((key, value)) = meta.split_once(':') else { continue };
            let value = value.strip_prefix(' ').unwrap_or(value);
            match key.trim() {
                "bound" => {
                    bound = Some(value.trim().parse().map_err(|_| NrpError::Parse {
                        line,
                        message: format!("bad bound `{}`", value.trim()),
                    })?)
                }
                "note" => note = unescape(value),
                "requirement-ids" => requirement_ids = Some(parse_ids(line, value)?),
                "customer-ids" => customer_ids = Some(parse_ids(line, value)?),
                _ => {}
            }
            continue;
        }
        tokens.extend(trimmed.split_whitespace().map(|t| (line, t)));
    }
    let mut t = Tokens { tokens, at: 0, last_line };

    let levels: usize = t.next("the number of levels")?;
    let mut costs = Vec::new();
    for _ in 0..levels.max(1) {
        let count: usize = t.next("a requirement count")?;
        for _ in 0..count {
            costs.push(t.next::<u64>("a requirement cost")?);
        }
    }
    let req_ids = match requirement_ids {
        Some(ids) if ids.len() != costs.len() => {
            return Err(NrpError::Parse {
                line: 1,
                message: format!("{} requirement ids for {} requirements", ids.len(), costs.len()),
            })
        }
        Some(ids) => ids,
        None => (1..=costs.len() as u32).collect(),
    };
    let requirements = req_ids
        .iter()
        .zip(&costs)
        .map(|(&id, &cost)| Requirement { id: RequirementId(id), cost })
        .collect();

    let arc_line = t.line();
    let num_arcs: usize = t.next("the number of dependencies")?;
    if levels == 0 && num_arcs > 0 {
        return Err(NrpError::Parse {
            line: arc_line,
            message: "a simplified file cannot declare dependencies".into(),
        });
    }
    let mut arcs = Vec::with_capacity(num_arcs);
    for _ in 0..num_arcs {
        let parent = RequirementId(t.next("a parent id")?);
        let child = RequirementId(t.next("a child id")?);
        arcs.push((parent, child));
    }

    let num_customers: usize = t.next("the number of customers")?;
    let cust_ids = match customer_ids {
        Some(ids) if ids.len() != num_customers => {
            return Err(NrpError::Parse {
                line: 1,
                message: format!("{} customer ids for {num_customers} customers", ids.len()),
            })
        }
        Some(ids) => ids,
        None => (1..=num_customers as u32).collect(),
    };
    let mut customers = Vec::with_capacity(num_customers);
    for &id in &cust_ids {
        let profit = t.next("a customer profit")?;
        let k: usize = t.next("a request count")?;
        let row = (0..k)
            .map(|_| t.next("a requested id").map(RequirementId))
            .collect::<Result<Vec<_>>>()?;
        customers.push((Customer { id: CustomerId(id), profit }, row));
    }
    if t.at < t.tokens.len() {
        return Err(NrpError::Parse { line: t.line(), message: "trailing data".into() });
    }

    Ok(InstanceFile { levels, requirements, arcs, customers, bound, note })
}

fn missing_bound() -> NrpError {
    NrpError::Parse { line: 1, message: "missing `# bound:` line".into() }
}

/// Parses an instance file. Dependent files are folded into simplified form.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let file = parse_file(text)?;
    let bound = file.bound.ok_or_else(missing_bound)?;
    if file.levels == 0 {
        Instance::new(file.requirements, file.customers, bound, file.note)
    } else {
        let dep = DependentInstance::new(file.requirements, file.arcs, file.customers, bound)?;
        Ok(dep.to_simplified().with_note(file.note))
    }
}

/// Parses an instance file keeping its dependencies.
pub fn parse_dependent(text: &str) -> Result<DependentInstance> {
    let file = parse_file(text)?;
    let bound = file.bound.ok_or_else(missing_bound)?;
    DependentInstance::new(file.requirements, file.arcs, file.customers, bound)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_instance(inst))?;
    Ok(())
}

/// Renders `inst` in simplified form. [`parse_instance`] inverts it exactly.
pub fn format_instance(inst: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "# bound: {}", inst.budget()).unwrap();
    if !inst.note().is_empty() {
        writeln!(out, "# note: {}", escape(inst.note())).unwrap();
    }
    let req_ids: Vec<u32> = inst.requirements().iter().map(|r| r.id.0).collect();
    if !is_natural(&req_ids) {
        writeln!(out, "# requirement-ids: {}", join(req_ids.iter())).unwrap();
    }
    let cust_ids: Vec<u32> = inst.customers().iter().map(|c| c.id.0).collect();
    if !is_natural(&cust_ids) {
        writeln!(out, "# customer-ids: {}", join(cust_ids.iter())).unwrap();
    }
    writeln!(out, "0").unwrap();
    writeln!(out, "{}", inst.num_requirements()).unwrap();
    writeln!(out, "{}", join(inst.requirements().iter().map(|r| r.cost))).unwrap();
    writeln!(out, "0").unwrap();
    writeln!(out, "{}", inst.num_customers()).unwrap();
    for (i, c) in inst.customers().iter().enumerate() {
        let row = inst.requests(i);
        write!(out, "{} {}", c.profit, row.len()).unwrap();
        for &j in row {
            write!(out, " {}", inst.requirements()[j as usize].id.0).unwrap();
        }
        out.push('\n');
    }
    out
}

fn is_natural(ids: &[u32]) -> bool {
    ids.iter().enumerate().all(|(k, &id)| id as usize == k + 1)
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\n', "\\n").replace('\r', "\\r")
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => out.push(other),
            None => out.push('\\'),
        }
    }
    out
}
