// Command-line entry point. Subcommands are filled in as the library grows;
// this stub keeps the target linking during bring-up.
#include <cstdio>

int main() {
    std::puts("vlens: not yet wired up");
    return 3;
}
