#include <iostream>

int main() {
  std::cout << "berger CLI placeholder\n";
  return 0;
}
