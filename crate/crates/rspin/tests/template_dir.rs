use rspin::thurston_veech::{load_template, Labels, TEMPLATE_DIR_VAR};
use rspin::Error;

#[test]
fn template_directory_override() {
    let dir = std::env::temp_dir().join(format!("rspin-templates-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bundled = load_template(Labels::Twelve, 3).unwrap();
    let mut renamed = bundled.clone();
    renamed.name = "override".into();
    std::fs::write(dir.join("curvelabels12-g3.toml"), renamed.to_toml()).unwrap();
    std::fs::write(dir.join("curvelabels12-g4.toml"), "genus = 4\ncurves = 3\n").unwrap();
    std::env::set_var(TEMPLATE_DIR_VAR, &dir);
    assert_eq!(load_template(Labels::Twelve, 3).unwrap().name, "override");
    assert!(matches!(load_template(Labels::Twelve, 4), Err(Error::Template(_))));
    assert!(matches!(load_template(Labels::Twelve, 5), Err(Error::Template(_))));
    std::env::remove_var(TEMPLATE_DIR_VAR);
    assert_eq!(load_template(Labels::Twelve, 5).unwrap().genus, 5);
    std::fs::remove_dir_all(&dir).unwrap();
}
