use std::env;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").unwrap();

    let mut config = cbindgen::Config {
        language: cbindgen::Language::C,
        cpp_compat: true,
        usize_is_size_t: true,
        documentation: true,
        ..Default::default()
    };
    config.enumeration.prefix_with_name = true;
    // DgiKind appears in signatures only as a plain int; export it anyway
    // so C callers get the named constants.
    config.export.include = vec!["DgiKind".to_string()];

    println!("cargo:rerun-if-changed=src/lib.rs");

    cbindgen::Builder::new()
        .with_config(config)
        .with_include_guard("DUALINV_H")
        .with_crate(&crate_dir)
        .generate()
        .expect("failed to generate C bindings")
        .write_to_file(format!("{crate_dir}/include/dualinv.h"));
}
