//! Evaluate formulas on a small model read from JSON.

use dgl::doc::ModelDoc;
use dgl::formula::parse;
use dgl::model::PosetModel;

fn main() {
    let doc: ModelDoc = serde_json::from_str(include_str!("../fixtures/two_chain.json")).unwrap();
    let m = PosetModel::from_doc(&doc).unwrap();
    for text in ["p", "<>p", "[]([]p -> p) -> []p", "G p", "F ~p"] {
        let f = parse(text).unwrap();
        let at: Vec<&str> = (0..m.len())
            .filter(|&x| m.satisfies(x, &f))
            .map(|x| m.names()[x].as_str())
            .collect();
        println!("{text:>22}  true at {at:?}");
    }
}
