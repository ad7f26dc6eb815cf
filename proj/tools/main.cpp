#include <cstdio>
int main() { std::puts("questforge cli placeholder"); return 0; }
