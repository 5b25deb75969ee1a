//! Keeps the guide's structure honest: every chapter listed in SUMMARY.md
//! exists, every chapter file is listed, and every chapter is wired into
//! the doc-test hooks.

use std::collections::BTreeSet;
use std::path::PathBuf;

fn book_src() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../book/src")
}

#[test]
fn summary_links_match_chapter_files() {
    let summary = std::fs::read_to_string(book_src().join("SUMMARY.md")).unwrap();
    let linked: BTreeSet<String> = summary
        .lines()
        .filter_map(|l| {
            let (_, rest) = l.split_once("](")?;
            let (path, _) = rest.split_once(')')?;
            Some(path.to_string())
        })
        .collect();
    assert!(!linked.is_empty());

    let on_disk: BTreeSet<String> = std::fs::read_dir(book_src())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().into_string().ok())
        .filter(|n| n.ends_with(".md") && n != "SUMMARY.md")
        .collect();

    assert_eq!(linked, on_disk, "SUMMARY.md and book/src/ disagree");
}

#[test]
fn every_chapter_has_a_doctest_hook() {
    let hooks = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src/book.rs"),
    )
    .unwrap();
    for entry in std::fs::read_dir(book_src()).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if name.ends_with(".md") && name != "SUMMARY.md" {
            assert!(
                hooks.contains(&format!("book/src/{name}")),
                "chapter {name} is not doc-tested"
            );
        }
    }
}
