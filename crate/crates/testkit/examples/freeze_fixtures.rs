fn main() {
    let golden = oppwelfare_testkit::fixtures::freeze();
    let mut text = serde_json::to_string_pretty(&golden).expect("fixture encodes");
    text.push('\n');
    std::fs::write(oppwelfare_testkit::fixtures::GOLDEN_PATH, text).expect("fixture written");
    println!("wrote {} cases to {}", golden.cases.len(), oppwelfare_testkit::fixtures::GOLDEN_PATH);
}
