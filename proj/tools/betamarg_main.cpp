#include <cstdio>

int main() {
    std::puts("betamarg: CLI not wired yet");
    return 0;
}
