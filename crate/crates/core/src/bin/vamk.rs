fn main() {
    println!("vamk");
}
