// Placeholder; the full command set lands with the solvers.
#include <cstdio>

int main() {
  std::puts("otkit: commands not wired up yet");
  return 2;
}
