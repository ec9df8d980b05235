def X { p.e->q.x; p.e->q.x; X }
main { X }
