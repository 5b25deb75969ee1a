//! Doc-test hooks for the guide: every Rust snippet in `book/src/` is
//! compiled and run by `cargo test --doc`, so the book cannot drift from
//! the library. The module only exists during doctest collection.

macro_rules! chapter {
    ($(#[$meta:meta])* $name:ident, $path:literal) => {
        $(#[$meta])*
        #[doc = include_str!($path)]
        pub struct $name;
    };
}

chapter!(Introduction, "../../../book/src/introduction.md");
chapter!(Model, "../../../book/src/model.md");
chapter!(Store, "../../../book/src/store.md");
chapter!(Turtle, "../../../book/src/turtle.md");
chapter!(Rules, "../../../book/src/rules.md");
chapter!(Preprocessing, "../../../book/src/preprocessing.md");
chapter!(Annotations, "../../../book/src/annotations.md");
chapter!(Ingest, "../../../book/src/ingest.md");
chapter!(Cli, "../../../book/src/cli.md");
chapter!(Extending, "../../../book/src/extending.md");
