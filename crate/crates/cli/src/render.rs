//! Plain-text output.

use arrfac::factor::{AddDelReport, Witness};
use arrfac::{Certificate, Lattice, Partition};

fn list(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn set(v: &[usize]) -> String {
    format!("{{{}}}", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

pub fn partition(p: &Partition) -> String {
    p.to_string()
}

pub fn lattice(lat: &Lattice) -> String {
    let mut out = Vec::new();
    for (i, x) in lat.flats().iter().enumerate() {
        let members: Vec<usize> = x.members().iter().map(|m| m + 1).collect();
        let name = if members.is_empty() { "V".to_string() } else { set(&members) };
        out.push(format!("rank {}  {name}  mu={}", x.rank(), lat.mobius(i)));
    }
    out.join("\n")
}

fn witness(w: &Witness, depth: usize) -> Vec<String> {
    let pad = "  ".repeat(depth);
    match w {
        Witness::None => vec![],
        Witness::Partition { partition } => vec![format!("{pad}witness: partition {partition}")],
        Witness::DependentTransversal { hyperplanes } => {
            vec![format!("{pad}witness: dependent transversal {}", set(hyperplanes))]
        }
        Witness::NoSingleton { flat, induced } => {
            vec![format!("{pad}witness: flat {} induces {induced} with no singleton block", set(flat))]
        }
        Witness::PoincareNotFactored { poincare } => {
            vec![format!("{pad}witness: Poincaré polynomial {poincare} has no integer linear factorization")]
        }
        Witness::ModularChain { flats } => {
            let chain: Vec<String> = flats.iter().map(|f| set(f)).collect();
            vec![format!("{pad}witness: modular chain {}", chain.join(" < "))]
        }
        Witness::InductionOrder { order } => vec![format!("{pad}witness: induction order {}", list(order))],
        Witness::Factorization { partition, order } => {
            vec![format!("{pad}witness: factorization {partition} built in order {}", list(order))]
        }
        Witness::ExponentMismatch { exponents, block_sizes } => vec![format!(
            "{pad}witness: inductive exponents {} against block sizes {}",
            list(exponents),
            list(block_sizes)
        )],
        Witness::FailingRestriction { flat, certificate } => {
            let mut v = vec![format!("{pad}witness: restriction to {} fails", set(flat))];
            v.extend(certificate_lines(certificate, depth + 1));
            v
        }
        Witness::DimensionMismatch { degree, domain, codomain } => {
            vec![format!("{pad}witness: degree {degree} has domain dimension {domain} and codomain dimension {codomain}")]
        }
        Witness::Singular { degree } => vec![format!("{pad}witness: κ is singular in degree {degree}")],
        Witness::GradedDimensions { dims } => vec![format!("{pad}witness: graded dimensions {}", list(dims))],
    }
}

fn certificate_lines(c: &Certificate, depth: usize) -> Vec<String> {
    let pad = "  ".repeat(depth);
    let name = serde_json::to_value(c.property).expect("serializable");
    let mut v = vec![format!("{pad}{}: {}", name.as_str().unwrap_or_default(), c.verdict)];
    if let Some(p) = &c.partition {
        v.push(format!("{pad}partition: {p}"));
    }
    if let Some(e) = &c.exponents {
        v.push(format!("{pad}exponents: {}", list(e)));
    }
    v.extend(witness(&c.witness, depth));
    v
}

pub fn certificate(c: &Certificate) -> String {
    certificate_lines(c, 0).join("\n")
}

pub fn add_del(r: &AddDelReport) -> String {
    let mut v = vec![
        format!("pivot {}", r.pivot + 1),
        format!("  (i)   nice for A:   {}", r.nice_whole),
        format!("  (ii)  nice for A':  {}", r.nice_deleted),
        format!("  (iii) R bijective and nice for A'': {}", r.third_statement()),
    ];
    if r.violation {
        v.push("THEOREM VIOLATION".into());
    }
    v.join("\n")
}
