#include <cstdio>

// Placeholder entry point; the dispatcher lands with the front-end module.
int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::fprintf(stderr, "wallx: command dispatcher not wired up yet\n");
  return 64;
}
