int mask(int a, int b) { return a & b; }

int combine(int a, int b) { return a | b; }

int half(int a) { return a >> 1; }

int dbl(int a) { return a << 1; }

int inc(int a) { int x = a; x += 1; return x; }

int neg(int a) { return -a; }

int countdown(int n) { int steps = 0; for (long i = 0; i < n; i++) { steps++; } return steps; }
