fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("manifest dir");
    let header = std::path::Path::new(&crate_dir).join("include").join("lg36.h");
    std::fs::create_dir_all(header.parent().unwrap()).expect("include directory");
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_language(cbindgen::Language::C)
        .with_include_guard("LG36_H")
        .with_cpp_compat(true)
        .with_documentation(true)
        .generate()
        .expect("C header generation")
        .write_to_file(&header);
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=build.rs");
}
