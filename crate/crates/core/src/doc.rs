//! JSON document shapes for models, states, quasimodels and lassos.
//!
//! Order edges are `[below, above]` pairs; the tools close them transitively.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub points: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    pub f: BTreeMap<String, String>,
    #[serde(default)]
    pub val: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDoc {
    pub points: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    pub root: String,
    pub labels: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasimodelDoc {
    pub points: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(rename = "S")]
    pub s: Vec<(String, String)>,
    pub labels: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<String>>,
    /// Present on search certificates: the point whose label carries the goal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LassoDoc {
    pub stem: Vec<String>,
    #[serde(rename = "loop")]
    pub cycle: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_doc_shape() {
        let text = r#"{"points":["a","b"], "order":[["a","b"]], "f":{"a":"a","b":"b"}, "val":{"p":["a"]}}"#;
        let doc: ModelDoc = serde_json::from_str(text).unwrap();
        assert_eq!(doc.order, vec![("a".to_string(), "b".to_string())]);
        assert_eq!(doc.val["p"], vec!["a".to_string()]);
    }

    #[test]
    fn quasimodel_doc_ignores_unknown_fields() {
        let text = r#"{"points":["w"], "S":[["w","w"]], "labels":{"w":["~p"]}, "extra": 1}"#;
        let doc: QuasimodelDoc = serde_json::from_str(text).unwrap();
        assert_eq!(doc.s.len(), 1);
        assert!(doc.sigma.is_none());
    }

    #[test]
    fn lasso_doc_uses_loop_key() {
        let doc = LassoDoc {
            stem: vec!["v".into()],
            cycle: vec!["w".into()],
        };
        assert_eq!(
            serde_json::to_string(&doc).unwrap(),
            r#"{"stem":["v"],"loop":["w"]}"#
        );
    }
}
