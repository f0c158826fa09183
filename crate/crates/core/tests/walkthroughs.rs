//! Every walkthrough is frozen: the rendered text must match its
//! checked-in copy byte for byte, so the walkthroughs double as
//! regression anchors for everything they touch.

use gamesem_core::demo;

#[test]
fn every_walkthrough_matches_its_frozen_text() {
    let frozen: [(&str, &str); 6] = [
        ("fig1", include_str!("golden/fig1.txt")),
        ("fig2", include_str!("golden/fig2.txt")),
        ("por", include_str!("golden/por.txt")),
        ("fixpoint", include_str!("golden/fixpoint.txt")),
        ("continuity", include_str!("golden/continuity.txt")),
        ("nerode", include_str!("golden/nerode.txt")),
    ];
    assert_eq!(frozen.len(), demo::NAMES.len(), "a walkthrough is missing its frozen copy");
    for (name, expected) in frozen {
        assert!(demo::NAMES.contains(&name), "unknown walkthrough {name}");
        assert_eq!(
            demo::render(name).expect("known name"),
            expected,
            "walkthrough {name} drifted from its frozen text"
        );
    }
}
