// mfb command line: placeholder, filled in with the harness
#include <cstdio>

int main() {
  std::puts("mfb: not wired up yet");
  return 2;
}
