#![no_main]

use libfuzzer_sys::fuzz_target;
use resgraph::parse_graph_document;

fuzz_target!(|data: &[u8]| {
    if let Ok(doc) = parse_graph_document(data) {
        let again = parse_graph_document(doc.to_json().as_bytes()).expect("serialized document reparses");
        assert_eq!(doc, again);
    }
});
