#include <cstdio>

int main() {
    std::puts("graphhj: command surface not wired yet");
    return 0;
}
