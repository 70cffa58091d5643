int main() { return 0; }  // placeholder while calibrating
