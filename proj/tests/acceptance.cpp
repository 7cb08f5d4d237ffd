#include "tachyon/tachyon.hpp"
int main() { return 0; }
