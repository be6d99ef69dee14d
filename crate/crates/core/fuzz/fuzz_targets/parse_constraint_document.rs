#![no_main]

use libfuzzer_sys::fuzz_target;
use resgraph::parse_constraint_document;

fuzz_target!(|data: &[u8]| {
    if let Ok(doc) = parse_constraint_document(data) {
        let text = doc.to_value().to_string();
        let again = parse_constraint_document(text.as_bytes()).expect("serialized constraints reparse");
        assert_eq!(doc, again);
    }
});
