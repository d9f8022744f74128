#include <cstdio>

int main() {
    std::puts("dqsim: placeholder");
    return 0;
}
