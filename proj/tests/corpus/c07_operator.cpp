struct Vec2 {
  double x = 0;
  double y = 0;
};

Vec2 operator+(const Vec2& a, const Vec2& b) {
  return {a.x + b.x, a.y + b.y};
}

bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }

double length_sq(const Vec2& v) {
  return v.x * v.x + v.y * v.y;
}
