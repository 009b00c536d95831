//! The shipped examples are the canonical printouts of the library objects.
//! Set `DGW_BLESS=1` to rewrite them.

use std::path::PathBuf;

use dgw_cli::goldens::{build, NAMES};
use dgw_cli::parse_document;

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(format!("{name}.dgw"))
}

#[test]
fn examples_match_library_objects() {
    for name in NAMES {
        let ws = build(name).unwrap();
        let text = ws.to_text();
        if std::env::var_os("DGW_BLESS").is_some() {
            std::fs::write(path(name), &text).unwrap();
        }
        let shipped = std::fs::read_to_string(path(name)).unwrap();
        assert_eq!(shipped, text, "{name}.dgw is stale");
        assert_eq!(
            parse_document(&shipped).unwrap(),
            ws,
            "{name}.dgw parses to different objects"
        );
    }
}

#[test]
fn schema_names_what_the_parser_accepts() {
    let schema: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema/dgw.schema.json"),
        )
        .unwrap(),
    )
    .unwrap();
    let top = schema["properties"].as_object().unwrap();
    assert_eq!(top.len(), 7);
    assert!(top.keys().all(|k| dgw_cli::document::is_top_level_key(k)));
    let kinds: Vec<&str> = schema["$defs"]["task"]["properties"]["task"]["enum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    for name in NAMES {
        for t in build(name).unwrap().tasks {
            assert!(kinds.contains(&t.spec.kind()), "{}", t.spec.kind());
        }
    }
}
