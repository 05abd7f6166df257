//! Bounded satisfiability search with a quasimodel certificate.

use dgl::formula::parse;
use dgl::search::{sat_search, SearchBounds, Verdict};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "G([]p & p) & ~[]G p".into());
    let f = parse(&text).expect("well formed");
    let out = sat_search(&f, &SearchBounds::default()).unwrap();
    println!("{text}: {} states, {} levels", out.stats.states, out.stats.levels);
    match out.verdict {
        Verdict::Sat { certificate, witness } => {
            println!("SAT, witness {}", certificate.names()[witness]);
            println!("{}", serde_json::to_string_pretty(&certificate.to_doc()).unwrap());
        }
        Verdict::NoWithinBounds { exhausted } => println!("no model within bounds (exhausted: {exhausted})"),
    }
}
