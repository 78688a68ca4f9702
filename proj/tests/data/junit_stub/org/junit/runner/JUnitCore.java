package org.junit.runner;

import java.lang.reflect.InvocationTargetException;
import java.lang.reflect.Method;

public final class JUnitCore {
    public static void main(String[] args) throws Exception {
        Class<?> cls = Class.forName(args[0]);
        Object instance = cls.getDeclaredConstructor().newInstance();
        int run = 0;
        for (Method m : cls.getDeclaredMethods()) {
            if (!m.isAnnotationPresent(org.junit.Test.class)) {
                continue;
            }
            try {
                m.invoke(instance);
            } catch (InvocationTargetException e) {
                System.err.println("FAILED: " + m.getName());
                e.getCause().printStackTrace();
                System.exit(1);
            }
            run++;
        }
        System.out.println("OK (" + run + " tests)");
    }
}
